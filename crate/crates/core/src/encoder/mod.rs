//! The bit-interpretation: position assignment, atomic codes, and the
//! recursive encoding of derived concepts.

mod code;
mod serial;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

pub use code::{BitCode, CompoundCode, Op, PositionValue, RestrictionSegment, SegmentKey};
pub use serial::deserialize_with_widths;

use crate::algebra::{Bit, QuantifierBit, RoleBit};
use crate::dl::{ConceptExpr, Hierarchy, RoleExpr, TBox};
use crate::error::{Error, Result};

/// Position assignment for one terminology. Positions are 1-based and
/// position 1 is the rightmost serialized character.
#[derive(Debug, Clone)]
pub struct EncodingContext {
    tbox: TBox,
    concept_position: HashMap<String, usize>,
    role_position: HashMap<String, usize>,
    /// Names by position, index 0 holding position 1.
    concept_order: Vec<String>,
    role_order: Vec<String>,
    atomic_codes: HashMap<String, BitCode>,
    role_codes: HashMap<String, Vec<RoleBit>>,
}

/// Topological order with parents first; among ready names the earliest declared wins.
fn topological_positions(h: &Hierarchy, cycle: fn(String) -> Error) -> Result<Vec<usize>> {
    let n = h.len();
    let mut pending: Vec<usize> = (0..n).map(|i| h.parents_of(i).len()).collect();
    let mut children = vec![Vec::new(); n];
    for i in 0..n {
        for &p in h.parents_of(i) {
            children[p].push(i);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &c in &children[i] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n)
            .find(|&i| pending[i] > 0)
            .expect("some name is unplaced");
        return Err(cycle(h.names()[stuck].clone()));
    }
    Ok(order)
}

/// Inherited codes: a 1 at the position of the name and of every ancestor.
fn inherited_codes(h: &Hierarchy, order: &[usize]) -> Vec<Vec<Bit>> {
    let mut position = vec![0; h.len()];
    for (pos, &i) in order.iter().enumerate() {
        position[i] = pos;
    }
    (0..h.len())
        .map(|i| {
            let mut bits = vec![Bit::Zero; h.len()];
            for a in h.ancestors_or_self(i) {
                bits[position[a]] = Bit::One;
            }
            bits
        })
        .collect()
}

impl EncodingContext {
    pub fn new(tbox: &TBox) -> Result<Self> {
        let concepts = tbox.concepts();
        if concepts.is_empty() {
            return Err(Error::EmptyContext);
        }
        let c_order = topological_positions(concepts, Error::ConceptCycle)?;
        let r_order = topological_positions(tbox.roles(), Error::RoleCycle)?;

        let concept_order: Vec<String> = c_order
            .iter()
            .map(|&i| concepts.names()[i].clone())
            .collect();
        let role_order: Vec<String> = r_order
            .iter()
            .map(|&i| tbox.roles().names()[i].clone())
            .collect();
        let atomic_codes = concepts
            .names()
            .iter()
            .cloned()
            .zip(
                inherited_codes(concepts, &c_order)
                    .into_iter()
                    .map(BitCode::from_bits),
            )
            .collect();
        let role_codes = tbox
            .roles()
            .names()
            .iter()
            .cloned()
            .zip(
                inherited_codes(tbox.roles(), &r_order)
                    .into_iter()
                    .map(|bits| {
                        bits.into_iter()
                            .map(|b| RoleBit::from_bit(b).expect("0/1 role bit"))
                            .collect()
                    }),
            )
            .collect();

        Ok(EncodingContext {
            tbox: tbox.clone(),
            concept_position: concept_order
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), i + 1))
                .collect(),
            role_position: role_order
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), i + 1))
                .collect(),
            concept_order,
            role_order,
            atomic_codes,
            role_codes,
        })
    }

    pub fn tbox(&self) -> &TBox {
        &self.tbox
    }

    pub fn concept_width(&self) -> usize {
        self.concept_order.len()
    }

    pub fn role_width(&self) -> usize {
        self.role_order.len()
    }

    pub fn concept_position(&self, name: &str) -> Option<usize> {
        self.concept_position.get(name).copied()
    }

    pub fn role_position(&self, name: &str) -> Option<usize> {
        self.role_position.get(name).copied()
    }

    /// Atomic concept names by position, position 1 first.
    pub fn concepts_by_position(&self) -> &[String] {
        &self.concept_order
    }

    pub fn roles_by_position(&self) -> &[String] {
        &self.role_order
    }

    pub fn top(&self) -> BitCode {
        BitCode::top(self.concept_width())
    }

    pub fn bottom(&self) -> BitCode {
        BitCode::bottom(self.concept_width())
    }

    pub fn encode_atomic(&self, name: &str) -> Result<BitCode> {
        match self.atomic_codes.get(name) {
            Some(c) => Ok(c.clone()),
            None if self.tbox.definition(name).is_some() => Err(Error::NotAtomic(name.to_string())),
            None => Err(Error::Undeclared(name.to_string())),
        }
    }

    /// Encodes a name, atomic or defined.
    pub fn encode_name(&self, name: &str) -> Result<BitCode> {
        self.encode(&ConceptExpr::atomic(name))
    }

    pub fn encode(&self, expr: &ConceptExpr) -> Result<BitCode> {
        Ok(match expr {
            ConceptExpr::Atomic(name) => match self.tbox.definition(name) {
                Some(def) => self.encode(def)?,
                None => self.encode_atomic(name)?,
            },
            ConceptExpr::Top => self.top(),
            ConceptExpr::Bottom => self.bottom(),
            ConceptExpr::Not(e) => neg(&self.encode(e)?),
            ConceptExpr::And(a, b) => {
                combine_normalized(Op::Meet, &self.encode(a)?, &self.encode(b)?)
            }
            ConceptExpr::Or(a, b) => {
                combine_normalized(Op::Join, &self.encode(a)?, &self.encode(b)?)
            }
            ConceptExpr::All(r, c) => self.restriction(QuantifierBit::Forall, r, c)?,
            ConceptExpr::Some(r, c) => self.restriction(QuantifierBit::Exists, r, c)?,
        })
    }

    fn restriction(
        &self,
        quantifier: QuantifierBit,
        role: &RoleExpr,
        filler: &ConceptExpr,
    ) -> Result<BitCode> {
        let segment = RestrictionSegment {
            quantifier,
            role_code: self.encode_role(role)?,
            filler: self.encode(filler)?,
        };
        Ok(BitCode {
            concept_bits: vec![PositionValue::Plain(Bit::Zero); self.concept_width()],
            segments: vec![segment],
        })
    }

    pub fn encode_role(&self, role: &RoleExpr) -> Result<Vec<RoleBit>> {
        Ok(match role {
            RoleExpr::Atomic(name) => self
                .role_codes
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UndeclaredRole(name.clone()))?,
            RoleExpr::Union(a, b) => self
                .encode_role(a)?
                .into_iter()
                .zip(self.encode_role(b)?)
                .map(|(x, y)| x.join(y))
                .collect(),
            RoleExpr::Intersection(a, b) => self
                .encode_role(a)?
                .into_iter()
                .zip(self.encode_role(b)?)
                .map(|(x, y)| x.meet(y))
                .collect(),
        })
    }

    pub fn deserialize(&self, text: &str) -> Result<BitCode> {
        deserialize_with_widths(text, self.concept_width(), self.role_width())
    }

    /// Fails unless `code` has this context's width.
    pub fn check(&self, code: &BitCode) -> Result<()> {
        if code.width() != self.concept_width() {
            return Err(Error::ContextMismatch(format!(
                "code width {} against context width {}",
                code.width(),
                self.concept_width()
            )));
        }
        Ok(())
    }
}

/// Combines two codes of one context. Inputs are normalized first.
pub fn combine(op: Op, a: &BitCode, b: &BitCode) -> Result<BitCode> {
    if a.width() != b.width() {
        return Err(Error::ContextMismatch(format!(
            "operand widths {} and {}",
            a.width(),
            b.width()
        )));
    }
    Ok(combine_normalized(op, &normalize(a), &normalize(b)))
}

/// Combination of two normalized, equal-width codes.
///
/// Codes whose plain bits differ in at most one position and whose segment
/// keys line up combine positionwise; anything else becomes a compound.
/// The rule is the same for both operators, which keeps negation a
/// representation-level De Morgan dual.
pub(crate) fn combine_normalized(op: Op, a: &BitCode, b: &BitCode) -> BitCode {
    if a == b {
        return a.clone();
    }
    if let Some(c) = extreme_shortcut(op, a, b) {
        return c;
    }
    if let (Some(x), Some(y)) = (a.plain_bits(), b.plain_bits()) {
        let differing = x.iter().zip(&y).filter(|(p, q)| p != q).count();
        let keys_match = a.segments.len() == b.segments.len()
            && a.segments
                .iter()
                .zip(&b.segments)
                .all(|(s, t)| s.same_key(t));
        if differing <= 1 && keys_match {
            let bits = x.iter().zip(&y).map(|(&p, &q)| op.apply(p, q));
            let code = BitCode {
                concept_bits: bits.map(PositionValue::Plain).collect(),
                segments: Vec::new(),
            };
            return apply_lemmas(BitCode {
                segments: merge_segments(op, &a.segments, &b.segments),
                ..code
            });
        }
    }
    make_compound(op, vec![a.clone(), b.clone()], a.width())
}

fn extreme_shortcut(op: Op, a: &BitCode, b: &BitCode) -> Option<BitCode> {
    type Test = fn(&BitCode) -> bool;
    let (absorbing, identity): (Test, Test) = match op {
        Op::Join => (BitCode::is_top, BitCode::is_bottom),
        Op::Meet => (BitCode::is_bottom, BitCode::is_top),
    };
    if absorbing(a) || identity(b) {
        Some(a.clone())
    } else if absorbing(b) || identity(a) {
        Some(b.clone())
    } else {
        None
    }
}

/// Builds a canonical compound: same-operator operands flattened, identities
/// dropped, absorbing extremes propagated, operands deduplicated and sorted.
fn make_compound(op: Op, operands: Vec<BitCode>, width: usize) -> BitCode {
    let mut flat = Vec::new();
    for o in operands {
        match o.as_compound() {
            Some(c) if c.op == op => flat.extend(c.operands.iter().cloned()),
            _ => flat.push(o),
        }
    }
    let (absorbing, identity) = match op {
        Op::Join => (BitCode::top(width), BitCode::bottom(width)),
        Op::Meet => (BitCode::bottom(width), BitCode::top(width)),
    };
    if flat.contains(&absorbing) {
        return absorbing;
    }
    let mut keyed: Vec<(String, BitCode)> = flat
        .into_iter()
        .filter(|o| *o != identity)
        .map(|o| (o.serialize(), o))
        .collect();
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    keyed.dedup_by(|x, y| x.0 == y.0);
    match keyed.len() {
        0 => identity,
        1 => keyed.pop().expect("one operand").1,
        _ => BitCode::compound(op, keyed.into_iter().map(|(_, o)| o).collect()),
    }
}

/// Merges two segment lists; equal keys combine their fillers with `op`.
/// The result is sorted by key.
fn merge_segments(
    op: Op,
    a: &[RestrictionSegment],
    b: &[RestrictionSegment],
) -> Vec<RestrictionSegment> {
    let mut merged: BTreeMap<SegmentKey, BitCode> = BTreeMap::new();
    for s in a.iter().chain(b) {
        let filler = match merged.remove(&s.key()) {
            Some(prev) => combine_normalized(op, &prev, &s.filler),
            None => s.filler.clone(),
        };
        merged.insert(s.key(), filler);
    }
    merged
        .into_iter()
        .map(|((quantifier, role_code), filler)| RestrictionSegment {
            quantifier,
            role_code,
            filler,
        })
        .collect()
}

/// The collapse rules on top-level plain bits: any ⊤ or all ⊤' gives the
/// ⊤-code, any ⊥ or all ⊥' gives the ⊥-code. Existential fillers are left alone.
fn apply_lemmas(code: BitCode) -> BitCode {
    let Some(bits) = code.plain_bits() else {
        return code;
    };
    let width = bits.len();
    if bits.contains(&Bit::Top) {
        return BitCode::top(width);
    }
    if bits.contains(&Bit::Bot) {
        return BitCode::bottom(width);
    }
    if width > 0 && bits.iter().all(|&b| b == Bit::TopPrime) {
        return BitCode::top(width);
    }
    if width > 0 && bits.iter().all(|&b| b == Bit::BotPrime) {
        return BitCode::bottom(width);
    }
    code
}

/// Brings any code to normal form: fillers and operands first, then compounds
/// lifted to span the whole code, then the collapse rules. Idempotent.
pub fn normalize(code: &BitCode) -> BitCode {
    let width = code.width();
    let segments: Vec<RestrictionSegment> = code
        .segments
        .iter()
        .map(|s| RestrictionSegment {
            filler: normalize(&s.filler),
            ..s.clone()
        })
        .collect();
    let segments = merge_segments(Op::Meet, &segments, &[]);

    let first_compound = code
        .concept_bits
        .iter()
        .position(|p| matches!(p, PositionValue::Compound(_)));
    let Some(i) = first_compound else {
        return apply_lemmas(BitCode {
            concept_bits: code.concept_bits.clone(),
            segments,
        });
    };
    let PositionValue::Compound(c) = &code.concept_bits[i] else {
        unreachable!()
    };
    if code.concept_bits.len() == 1 && segments.is_empty() {
        let operands = c.operands.iter().map(normalize).collect();
        return make_compound(c.op, operands, width);
    }
    // Surrounding positions and segments are conjuncts, so they distribute
    // into every operand of the compound.
    let lifted = c
        .operands
        .iter()
        .map(|o| {
            let mut bits = code.concept_bits[..i].to_vec();
            bits.extend(o.concept_bits.iter().cloned());
            bits.extend(code.concept_bits[i + 1..].iter().cloned());
            normalize(&BitCode {
                concept_bits: bits,
                segments: merge_segments(Op::Meet, &o.segments, &segments),
            })
        })
        .collect();
    make_compound(c.op, lifted, width)
}

/// Negation: plain bits through the negation table, segments flip their
/// quantifier and negate the filler, compounds flip their operator.
pub fn neg(code: &BitCode) -> BitCode {
    let concept_bits = code
        .concept_bits
        .iter()
        .map(|p| match p {
            PositionValue::Plain(b) => PositionValue::Plain(b.neg()),
            PositionValue::Compound(c) => {
                let mut operands: Vec<BitCode> = c.operands.iter().map(neg).collect();
                operands.sort_by_cached_key(BitCode::serialize);
                PositionValue::Compound(CompoundCode {
                    op: c.op.dual(),
                    operands,
                })
            }
        })
        .collect();
    let mut segments: Vec<RestrictionSegment> = code
        .segments
        .iter()
        .map(|s| RestrictionSegment {
            quantifier: s.quantifier.neg(),
            role_code: s.role_code.clone(),
            filler: neg(&s.filler),
        })
        .collect();
    segments.sort_by_key(RestrictionSegment::key);
    BitCode {
        concept_bits,
        segments,
    }
}

/// Positionwise projection: every compound is folded through its operator's
/// table, dropping the cross-position correlation it preserved. Segment
/// fillers are left as they are.
pub fn projection(code: &BitCode) -> BitCode {
    if code.is_plain() {
        return code.clone();
    }
    let mut bits = Vec::with_capacity(code.width());
    let mut segments = code.segments.clone();
    for p in &code.concept_bits {
        match p {
            PositionValue::Plain(b) => bits.push(PositionValue::Plain(*b)),
            PositionValue::Compound(c) => {
                let folded = fold_projection(c);
                bits.extend(folded.concept_bits);
                segments = merge_segments(Op::Meet, &segments, &folded.segments);
            }
        }
    }
    BitCode {
        concept_bits: bits,
        segments,
    }
}

fn fold_projection(c: &CompoundCode) -> BitCode {
    let mut operands = c.operands.iter().map(projection);
    let first = operands.next().expect("compound has operands");
    operands.fold(first, |acc, o| {
        let bits = acc
            .concept_bits
            .iter()
            .zip(&o.concept_bits)
            .map(|(x, y)| match (x, y) {
                (PositionValue::Plain(p), PositionValue::Plain(q)) => {
                    PositionValue::Plain(c.op.apply(*p, *q))
                }
                _ => unreachable!("projections are plain"),
            })
            .collect();
        BitCode {
            concept_bits: bits,
            segments: merge_segments(c.op, &acc.segments, &o.segments),
        }
    })
}

/// Plain bits of the projection, lowest position first.
pub fn projected_bits(code: &BitCode) -> Vec<Bit> {
    projection(code).plain_bits().expect("projection is plain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_expr, parse_tbox};
    use proptest::prelude::*;

    const DIAMOND: &str = "concept A\nB sub A\nC sub A\nD sub B\nD sub C\n";

    fn ctx(text: &str) -> EncodingContext {
        EncodingContext::new(&parse_tbox(text).unwrap()).unwrap()
    }

    fn enc(ctx: &EncodingContext, e: &str) -> String {
        ctx.encode(&parse_expr(e).unwrap()).unwrap().serialize()
    }

    fn proj(ctx: &EncodingContext, e: &str) -> String {
        projection(&ctx.encode(&parse_expr(e).unwrap()).unwrap()).serialize()
    }

    #[test]
    fn positions() {
        let d = ctx(DIAMOND);
        let got: Vec<_> = ["A", "B", "C", "D"]
            .iter()
            .map(|n| d.concept_position(n).unwrap())
            .collect();
        assert_eq!(got, [1, 2, 3, 4]);
        let single = ctx("concept A");
        assert_eq!(
            (single.concept_position("A"), single.concept_width()),
            (Some(1), 1)
        );
        let two = ctx("concept A\nconcept B");
        assert_eq!(
            (two.concept_position("A"), two.concept_position("B")),
            (Some(1), Some(2))
        );
        // children are placed after parents even when declared first
        let rev = ctx("D sub B\nB sub A");
        assert_eq!(rev.concepts_by_position(), ["A", "B", "D"]);
    }

    #[test]
    fn empty_context_is_an_error() {
        assert_eq!(
            EncodingContext::new(&TBox::new()).unwrap_err(),
            Error::EmptyContext
        );
    }

    #[test]
    fn atomic_codes() {
        let d = ctx(DIAMOND);
        let codes: Vec<_> = ["A", "B", "C", "D"].iter().map(|n| enc(&d, n)).collect();
        assert_eq!(codes, ["0001", "0011", "0101", "1111"]);
        assert_eq!(
            d.encode_atomic("Z").unwrap_err(),
            Error::Undeclared("Z".into())
        );
    }

    #[test]
    fn derived_codes() {
        let d = ctx(DIAMOND);
        assert_eq!(enc(&d, "not(B)"), "00NN");
        assert_eq!(proj(&d, "and(B, C)"), "0yy1");
        assert_eq!(proj(&d, "or(B, C)"), "0XX1");
        assert_eq!(enc(&d, "or(B, C)"), "(U:0011|0101)");
        assert_eq!(enc(&d, "and(B, C)"), "(I:0011|0101)");
        assert_eq!(enc(&d, "or(A, A)"), "0001");
        // one differing position combines positionwise
        assert_eq!(enc(&d, "or(A, B)"), "00X1");
        assert_eq!(enc(&d, "and(A, B)"), "00y1");
        assert_eq!(enc(&d, "or(top, B)"), "TTTT");
        assert_eq!(enc(&d, "and(bot, B)"), "FFFF");
        assert_eq!(enc(&d, "and(top, B)"), "0011");
    }

    #[test]
    fn roles_and_restrictions() {
        let c = ctx("concept A\nB sub A\nC sub A\nD sub B\nD sub C\nrole r\nrole s\n");
        let role = |s: &str| -> String {
            c.encode_role(&crate::dl::parse_role(s).unwrap())
                .unwrap()
                .iter()
                .rev()
                .map(|r| r.to_char())
                .collect()
        };
        assert_eq!(role("r"), "01");
        assert_eq!(role("s"), "10");
        assert_eq!(role("runion(r, s)"), "XX");
        assert_eq!(role("rinter(r, s)"), "yy");
        assert_eq!(enc(&c, "some(r, A)"), "0000[E|01|0001]");
        assert_eq!(enc(&c, "not(some(r, A))"), "0000[A|01|000N]");
        assert_eq!(
            enc(&c, "and(all(r, B), all(r, C))"),
            "0000[A|01|(I:0011|0101)]"
        );
        assert_eq!(enc(&c, "some(r, bot)"), "0000[E|01|FFFF]");
        let h = ctx("concept A\nrole r\nrole q sub r");
        assert_eq!(
            h.encode_role(&RoleExpr::atomic("q")).unwrap(),
            [RoleBit::One, RoleBit::One]
        );
    }

    #[test]
    fn normalize_examples() {
        let d = ctx(DIAMOND);
        let n = |s: &str| normalize(&d.deserialize(s).unwrap()).serialize();
        assert_eq!(n("0T01"), "TTTT");
        assert_eq!(n("tttt"), "TTTT");
        assert_eq!(n("ffff"), "FFFF");
        assert_eq!(n("0F01"), "FFFF");
        assert_eq!(n("0101"), "0101");
        assert_eq!(n("0(U:01|10)1"), "(U:0011|0101)");
        assert_eq!(n("(U:0101|0011|0101)"), "(U:0011|0101)");
        assert_eq!(n("(U:0101|FFFF)"), "0101");
    }

    #[test]
    fn single_atom_contradiction_collapses() {
        let a = ctx("concept A");
        assert_eq!(enc(&a, "and(A, not(A))"), "F");
        assert_eq!(enc(&a, "or(A, not(A))"), "T");
    }

    #[test]
    fn combine_checks_widths() {
        let err = combine(Op::Join, &BitCode::top(2), &BitCode::top(3)).unwrap_err();
        assert!(matches!(err, Error::ContextMismatch(_)));
    }

    fn random_tbox() -> impl Strategy<Value = TBox> {
        (2usize..7).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), n).prop_map(
                move |edges| {
                    let mut t = TBox::new();
                    t.add_role("r");
                    t.add_role("s");
                    for (i, row) in edges.iter().enumerate() {
                        t.add_concept(&format!("C{i}")).unwrap();
                        for (j, &edge) in row.iter().enumerate().take(i) {
                            if edge && (i + j) % 3 == 0 {
                                t.add_inclusion(&format!("C{i}"), &format!("C{j}")).unwrap();
                            }
                        }
                    }
                    t
                },
            )
        })
    }

    fn arb_expr(depth: u32) -> impl Strategy<Value = ConceptExpr> {
        let leaf = prop_oneof![
            6 => (0usize..7).prop_map(|i| ConceptExpr::atomic(format!("C{i}"))),
            1 => Just(ConceptExpr::Top),
            1 => Just(ConceptExpr::Bottom),
        ];
        leaf.prop_recursive(depth, 24, 2, |inner| {
            let role = prop_oneof![Just(RoleExpr::atomic("r")), Just(RoleExpr::atomic("s"))];
            prop_oneof![
                inner.clone().prop_map(ConceptExpr::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ConceptExpr::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ConceptExpr::or(a, b)),
                (role.clone(), inner.clone()).prop_map(|(r, c)| ConceptExpr::all(r, c)),
                (role, inner).prop_map(|(r, c)| ConceptExpr::some(r, c)),
            ]
        })
    }

    /// Clamps atom indices to the TBox so every generated expression is declared.
    fn clamp(e: &ConceptExpr, n: usize) -> ConceptExpr {
        match e {
            ConceptExpr::Atomic(name) => {
                let i: usize = name[1..].parse().unwrap();
                ConceptExpr::atomic(format!("C{}", i % n))
            }
            ConceptExpr::Top | ConceptExpr::Bottom => e.clone(),
            ConceptExpr::Not(x) => ConceptExpr::not(clamp(x, n)),
            ConceptExpr::And(a, b) => ConceptExpr::and(clamp(a, n), clamp(b, n)),
            ConceptExpr::Or(a, b) => ConceptExpr::or(clamp(a, n), clamp(b, n)),
            ConceptExpr::All(r, c) => ConceptExpr::all(r.clone(), clamp(c, n)),
            ConceptExpr::Some(r, c) => ConceptExpr::some(r.clone(), clamp(c, n)),
        }
    }

    fn count_operands(code: &BitCode) -> usize {
        code.concept_bits
            .iter()
            .map(|p| match p {
                PositionValue::Plain(_) => 0,
                PositionValue::Compound(c) => {
                    c.operands.len() + c.operands.iter().map(count_operands).sum::<usize>()
                }
            })
            .sum::<usize>()
            + code
                .segments
                .iter()
                .map(|s| count_operands(&s.filler))
                .sum::<usize>()
    }

    proptest! {
        #[test]
        fn rewrite_identities(t in random_tbox(), a in arb_expr(3), b in arb_expr(3)) {
            let c = EncodingContext::new(&t).unwrap();
            let n = t.atomic_concepts().len();
            let (a, b) = (clamp(&a, n), clamp(&b, n));
            let e = |x: ConceptExpr| c.encode(&x).unwrap().serialize();
            prop_assert_eq!(e(ConceptExpr::not(ConceptExpr::not(a.clone()))), e(a.clone()));
            prop_assert_eq!(e(ConceptExpr::and(a.clone(), b.clone())), e(ConceptExpr::and(b.clone(), a.clone())));
            prop_assert_eq!(e(ConceptExpr::or(a.clone(), b.clone())), e(ConceptExpr::or(b.clone(), a.clone())));
            prop_assert_eq!(e(ConceptExpr::and(a.clone(), a.clone())), e(a.clone()));
            prop_assert_eq!(e(ConceptExpr::or(a.clone(), a.clone())), e(a.clone()));
            prop_assert_eq!(
                e(ConceptExpr::not(ConceptExpr::and(a.clone(), b.clone()))),
                e(ConceptExpr::or(ConceptExpr::not(a.clone()), ConceptExpr::not(b.clone())))
            );
            prop_assert_eq!(
                e(ConceptExpr::not(ConceptExpr::or(a.clone(), b.clone()))),
                e(ConceptExpr::and(ConceptExpr::not(a), ConceptExpr::not(b)))
            );
        }

        #[test]
        fn serialization_roundtrip_and_normal_form(t in random_tbox(), a in arb_expr(4)) {
            let c = EncodingContext::new(&t).unwrap();
            let code = c.encode(&clamp(&a, t.atomic_concepts().len())).unwrap();
            prop_assert_eq!(code.width(), c.concept_width());
            prop_assert_eq!(&c.deserialize(&code.serialize()).unwrap(), &code);
            prop_assert_eq!(&normalize(&code), &code);
            let bits = code.plain_bits().unwrap_or_default();
            let extreme = bits.iter().any(|b| b.is_extreme());
            prop_assert!(!extreme || code.is_canonical_extreme());
        }

        #[test]
        fn atomic_codes_are_unique(t in random_tbox()) {
            let c = EncodingContext::new(&t).unwrap();
            let mut seen: Vec<String> = t.atomic_concepts().iter().map(|n| c.encode_atomic(n).unwrap().serialize()).collect();
            let len = seen.len();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), len);
        }

        #[test]
        fn join_chains_stay_within_growth_bound(t in random_tbox(), atoms in prop::collection::vec(0usize..7, 2..7)) {
            let c = EncodingContext::new(&t).unwrap();
            let n = t.atomic_concepts().len();
            let mut code = c.encode_atomic(&format!("C{}", atoms[0] % n)).unwrap();
            for (k, i) in atoms[1..].iter().enumerate() {
                code = combine(Op::Join, &code, &c.encode_atomic(&format!("C{}", i % n)).unwrap()).unwrap();
                prop_assert!(count_operands(&code) <= 3usize.pow(k as u32 + 1));
            }
        }
    }
}
