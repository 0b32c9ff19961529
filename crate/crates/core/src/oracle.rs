//! Brute-force model-theoretic evaluation over small finite interpretations.
//!
//! Propositional mode uses a one-element domain: each atomic concept is a sign
//! (member or not), constrained by the hierarchy. That is exact for
//! restriction-free expressions. Role mode enumerates every interpretation
//! over domains of up to three elements and can only refute.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Bit, QuantifierBit};
use crate::dl::{ConceptExpr, RoleExpr, TBox};
use crate::encoder::{BitCode, EncodingContext, Op, PositionValue};
use crate::error::{Error, Result};
use crate::gen::{random_expr, random_propositional_code};
use crate::similarity::{fcg, fcg::bit_coverage, lcs_atomic, subsumes, Subsumption};

pub const PROPOSITIONAL_CAP: usize = 12;
pub const ROLE_MODE_CAP: usize = 4;
pub const MAX_ROLE_DOMAIN: usize = 3;
/// Interpretations enumerated per domain size before that size is skipped.
pub const ROLE_MODE_BUDGET: u64 = 1 << 20;

/// A finite interpretation. Element `e` is bit `e` of a concept mask; the pair
/// `(a, b)` is bit `a * 8 + b` of a role mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_size: usize,
    pub concepts: HashMap<String, u8>,
    pub roles: HashMap<String, u64>,
}

fn pair_bit(a: usize, b: usize) -> u64 {
    1u64 << (a * 8 + b)
}

impl Interpretation {
    pub fn new(domain_size: usize) -> Self {
        assert!((1..=8).contains(&domain_size), "domain size must be 1..=8");
        Interpretation {
            domain_size,
            concepts: HashMap::new(),
            roles: HashMap::new(),
        }
    }

    pub fn full(&self) -> u8 {
        ((1u16 << self.domain_size) - 1) as u8
    }

    pub fn set_concept(&mut self, name: &str, elements: &[usize]) {
        self.concepts.insert(
            name.to_string(),
            elements.iter().fold(0, |m, &e| m | (1 << e)),
        );
    }

    pub fn set_role(&mut self, name: &str, pairs: &[(usize, usize)]) {
        self.roles.insert(
            name.to_string(),
            pairs.iter().fold(0, |m, &(a, b)| m | pair_bit(a, b)),
        );
    }

    pub fn role_extension(&self, r: &RoleExpr) -> Result<u64> {
        Ok(match r {
            RoleExpr::Atomic(n) => *self
                .roles
                .get(n)
                .ok_or_else(|| Error::UndeclaredRole(n.clone()))?,
            RoleExpr::Union(a, b) => self.role_extension(a)? | self.role_extension(b)?,
            RoleExpr::Intersection(a, b) => self.role_extension(a)? & self.role_extension(b)?,
        })
    }

    /// Extension of an expression whose defined names are already unfolded.
    pub fn extension(&self, expr: &ConceptExpr) -> Result<u8> {
        let full = self.full();
        Ok(match expr {
            ConceptExpr::Atomic(n) => *self
                .concepts
                .get(n)
                .ok_or_else(|| Error::Undeclared(n.clone()))?,
            ConceptExpr::Top => full,
            ConceptExpr::Bottom => 0,
            ConceptExpr::Not(e) => full & !self.extension(e)?,
            ConceptExpr::And(a, b) => self.extension(a)? & self.extension(b)?,
            ConceptExpr::Or(a, b) => self.extension(a)? | self.extension(b)?,
            ConceptExpr::All(r, c) | ConceptExpr::Some(r, c) => {
                let rel = self.role_extension(r)?;
                let filler = self.extension(c)?;
                let universal = matches!(expr, ConceptExpr::All(..));
                let mut out = 0u8;
                for a in 0..self.domain_size {
                    let succ = (0..self.domain_size).filter(|&b| rel & pair_bit(a, b) != 0);
                    let holds = if universal {
                        succ.into_iter().all(|b| filler & (1 << b) != 0)
                    } else {
                        succ.into_iter().any(|b| filler & (1 << b) != 0)
                    };
                    if holds {
                        out |= 1 << a;
                    }
                }
                out
            }
        })
    }

    /// Whether every declared inclusion between interpreted names holds.
    pub fn respects(&self, tbox: &TBox) -> bool {
        fn sub<V: Copy + Into<u64>>(m: &HashMap<String, V>, c: &str, p: &str) -> bool {
            match (m.get(c), m.get(p)) {
                (Some(&x), Some(&y)) => x.into() & !y.into() == 0,
                _ => true,
            }
        }
        tbox.concept_inclusions()
            .iter()
            .all(|(c, p)| sub(&self.concepts, c, p))
            && tbox
                .role_inclusions()
                .iter()
                .all(|(c, p)| sub(&self.roles, c, p))
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain={}", self.domain_size)?;
        let mut concepts: Vec<_> = self.concepts.iter().collect();
        concepts.sort();
        for (n, m) in concepts {
            let elems: Vec<String> = (0..self.domain_size)
                .filter(|e| m & (1 << e) != 0)
                .map(|e| e.to_string())
                .collect();
            write!(f, "; {n}={{{}}}", elems.join(","))?;
        }
        let mut roles: Vec<_> = self.roles.iter().collect();
        roles.sort();
        for (n, m) in roles {
            let mut pairs = Vec::new();
            for a in 0..self.domain_size {
                for b in 0..self.domain_size {
                    if m & pair_bit(a, b) != 0 {
                        pairs.push(format!("({a},{b})"));
                    }
                }
            }
            write!(f, "; {n}={{{}}}", pairs.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    /// No counter-model found. `exact` is false in role mode, where only
    /// small domains are searched.
    Holds {
        exact: bool,
    },
    Refuted(Interpretation),
}

impl OracleVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, OracleVerdict::Holds { .. })
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Holds { exact: true } => f.write_str("true"),
            OracleVerdict::Holds { exact: false } => {
                f.write_str("true (refutation-only, domain <= 3)")
            }
            OracleVerdict::Refuted(_) => f.write_str("false"),
        }
    }
}

/// Names referenced by the expressions, closed upwards under the hierarchies.
fn closure(tbox: &TBox, exprs: &[&ConceptExpr]) -> (Vec<String>, Vec<String>) {
    let mut concepts = BTreeSet::new();
    let mut roles = BTreeSet::new();
    for e in exprs {
        e.concept_names(&mut concepts);
        e.role_names(&mut roles);
    }
    let up = |h: &crate::dl::Hierarchy, names: BTreeSet<String>| -> Vec<String> {
        let mut idx: BTreeSet<usize> = BTreeSet::new();
        for n in &names {
            if let Some(i) = h.index_of(n) {
                idx.extend(h.ancestors_or_self(i));
            }
        }
        idx.into_iter().map(|i| h.names()[i].clone()).collect()
    };
    (up(tbox.concepts(), concepts), up(tbox.roles(), roles))
}

/// Calls `visit` on every hierarchy-respecting interpretation of `concepts`
/// and `roles` over a domain of `size` elements, stopping when it returns false.
fn for_each_interpretation(
    tbox: &TBox,
    size: usize,
    concepts: &[String],
    roles: &[String],
    mut visit: impl FnMut(&Interpretation) -> Result<bool>,
) -> Result<()> {
    let c_bits = size * concepts.len();
    let r_bits = size * size * roles.len();
    let total = c_bits + r_bits;
    let mut interp = Interpretation::new(size);
    let concept_mask = (1u64 << size) - 1;
    for n in concepts {
        interp.concepts.insert(n.clone(), 0);
    }
    for n in roles {
        interp.roles.insert(n.clone(), 0);
    }
    for bits in 0..(1u64 << total) {
        for (i, n) in concepts.iter().enumerate() {
            *interp.concepts.get_mut(n).expect("inserted above") =
                ((bits >> (i * size)) & concept_mask) as u8;
        }
        for (i, n) in roles.iter().enumerate() {
            let mut m = 0u64;
            for p in 0..size * size {
                if bits >> (c_bits + i * size * size + p) & 1 == 1 {
                    m |= pair_bit(p / size, p % size);
                }
            }
            *interp.roles.get_mut(n).expect("inserted above") = m;
        }
        if interp.respects(tbox) && !visit(&interp)? {
            break;
        }
    }
    Ok(())
}

/// Checks `ci ⊑ cj` by enumeration.
pub fn oracle_subsumes(ci: &ConceptExpr, cj: &ConceptExpr, tbox: &TBox) -> Result<OracleVerdict> {
    let (a, b) = (tbox.unfold(ci)?, tbox.unfold(cj)?);
    let (concepts, roles) = closure(tbox, &[&a, &b]);
    let propositional = a.is_propositional() && b.is_propositional();
    let (cap, sizes) = if propositional {
        (PROPOSITIONAL_CAP, 1..=1)
    } else {
        (ROLE_MODE_CAP, 1..=MAX_ROLE_DOMAIN)
    };
    if concepts.len() > cap {
        return Err(Error::EnumerationCap {
            size: concepts.len(),
            cap,
        });
    }
    let mut witness = None;
    for size in sizes {
        let bits = size * concepts.len() + size * size * roles.len();
        if bits >= 64 || (1u64 << bits) > ROLE_MODE_BUDGET.max(1 << PROPOSITIONAL_CAP) {
            continue;
        }
        for_each_interpretation(tbox, size, &concepts, &roles, |i| {
            if i.extension(&a)? & !i.extension(&b)? != 0 {
                witness = Some(i.clone());
                return Ok(false);
            }
            Ok(true)
        })?;
        if let Some(w) = witness {
            return Ok(OracleVerdict::Refuted(w));
        }
    }
    Ok(OracleVerdict::Holds {
        exact: propositional,
    })
}

/// Counts of covered sign assignments for a Jaccard ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    /// 1 when both counts are zero.
    pub fn value(&self) -> f64 {
        if self.denominator == 0 {
            1.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }
}

/// `|cov(ci ⊓ cj)| / |cov(ci ⊔ cj)|` over hierarchy-consistent sign assignments
/// of every atomic concept.
pub fn oracle_jaccard(ci: &ConceptExpr, cj: &ConceptExpr, tbox: &TBox) -> Result<Ratio> {
    let (a, b) = (tbox.unfold(ci)?, tbox.unfold(cj)?);
    if !(a.is_propositional() && b.is_propositional()) {
        return Err(Error::UnsupportedFragment(
            "oracle Jaccard needs restriction-free expressions".into(),
        ));
    }
    // Counts depend on the atoms enumerated, so every atom of the TBox takes part.
    let concepts = tbox.atomic_concepts();
    if concepts.len() > PROPOSITIONAL_CAP {
        return Err(Error::EnumerationCap {
            size: concepts.len(),
            cap: PROPOSITIONAL_CAP,
        });
    }
    let mut ratio = Ratio {
        numerator: 0,
        denominator: 0,
    };
    for_each_interpretation(tbox, 1, concepts, &[], |i| {
        let (x, y) = (i.extension(&a)?, i.extension(&b)?);
        ratio.numerator += (x & y) as u64;
        ratio.denominator += (x | y) as u64;
        Ok(true)
    })?;
    Ok(ratio)
}

/// Whether a code covers the assignment `mask`, evaluated directly.
fn covers(code: &BitCode, mask: u32) -> bool {
    let mut offset = 0;
    for p in &code.concept_bits {
        let w = p.width();
        let ok = match p {
            PositionValue::Plain(b) => {
                let (plus, minus) = bit_coverage(*b);
                if mask >> offset & 1 == 1 {
                    plus
                } else {
                    minus
                }
            }
            PositionValue::Compound(c) => {
                let sub = (mask >> offset) & ((1u32 << w) - 1);
                match c.op {
                    Op::Join => c.operands.iter().any(|o| covers(o, sub)),
                    Op::Meet => c.operands.iter().all(|o| covers(o, sub)),
                }
            }
        };
        if !ok {
            return false;
        }
        offset += w;
    }
    true
}

/// Code-generativity by testing every one of the `2^width` assignments.
pub fn fcg_enumerate(code: &BitCode, cap: usize) -> Result<u64> {
    if code.has_segments() {
        return Err(Error::UnsupportedFragment(
            "code-generativity needs a code without restriction segments".into(),
        ));
    }
    let n = code.width();
    if n > cap {
        return Err(Error::EnumerationCap { size: n, cap });
    }
    Ok((0u32..1 << n).filter(|&m| covers(code, m)).count() as u64)
}

/// Bits set at the positions of every common ancestor of two atomic concepts.
pub fn lcs_by_ancestors(a: &str, b: &str, ctx: &EncodingContext) -> Result<BitCode> {
    let h = ctx.tbox().concepts();
    let idx = |n: &str| {
        h.index_of(n)
            .ok_or_else(|| Error::Undeclared(n.to_string()))
    };
    let (ia, ib) = (idx(a)?, idx(b)?);
    let common: BTreeSet<usize> = h
        .ancestors_or_self(ia)
        .into_iter()
        .filter(|&x| h.is_below(ib, x))
        .collect();
    let mut bits = vec![Bit::Zero; ctx.concept_width()];
    for i in common {
        let pos = ctx.concept_position(&h.names()[i]).expect("declared");
        bits[pos - 1] = Bit::One;
    }
    Ok(BitCode::from_bits(bits))
}

pub const KIND_SUBSUMPTION: &str = "subsumption";
pub const KIND_LCS: &str = "lcs";
pub const KIND_FCG: &str = "fcg";
pub const KIND_INCOMPLETE: &str = "documented incompleteness";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub kind: &'static str,
    pub inputs: String,
    pub encoder: String,
    pub oracle: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub subsumption_trials: usize,
    pub agreements: usize,
    /// Encoder verdicts of UNKNOWN; never counted as agreement.
    pub unknown: usize,
    /// Trials skipped because they exceeded an enumeration cap.
    pub skipped: usize,
    pub lcs_pairs: usize,
    pub fcg_codes: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossCheckReport {
    /// Discrepancies outside the documented incompleteness category.
    pub fn disagreements(&self) -> usize {
        self.discrepancies
            .iter()
            .filter(|d| d.kind != KIND_INCOMPLETE)
            .count()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.discrepancies.iter().filter(|d| d.kind == kind).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("kind\tinputs\tencoder\toracle\twitness\n");
        for d in &self.discrepancies {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                d.kind, d.inputs, d.encoder, d.oracle, d.witness
            ));
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "subsumption trials {}, agreements {}, unknown {}, skipped {}, lcs pairs {}, fcg codes {}, disagreements {}, documented incompleteness {}",
            self.subsumption_trials,
            self.agreements,
            self.unknown,
            self.skipped,
            self.lcs_pairs,
            self.fcg_codes,
            self.disagreements(),
            self.count(KIND_INCOMPLETE)
        )
    }
}

/// Whether a code contains an existential restriction with an unsatisfiable filler.
pub fn has_empty_existential(code: &BitCode) -> bool {
    code.segments.iter().any(|s| {
        (s.quantifier == QuantifierBit::Exists && s.filler.is_bottom())
            || has_empty_existential(&s.filler)
    }) || code.concept_bits.iter().any(|p| match p {
        PositionValue::Plain(_) => false,
        PositionValue::Compound(c) => c.operands.iter().any(has_empty_existential),
    })
}

fn has_segments_anywhere(code: &BitCode) -> bool {
    code.has_segments()
        || code.concept_bits.iter().any(|p| match p {
            PositionValue::Plain(_) => false,
            PositionValue::Compound(c) => c.operands.iter().any(has_segments_anywhere),
        })
}

enum Comparison {
    Skipped,
    Unknown,
    Agreement,
    Disagreement(Discrepancy),
}

/// Compares one pair of expressions against the oracle.
fn compare_subsumption(
    ctx: &EncodingContext,
    ci: &ConceptExpr,
    cj: &ConceptExpr,
) -> Result<Comparison> {
    let oracle = match oracle_subsumes(ci, cj, ctx.tbox()) {
        Ok(v) => v,
        Err(Error::EnumerationCap { .. }) => return Ok(Comparison::Skipped),
        Err(e) => return Err(e),
    };
    let (a, b) = (ctx.encode(ci)?, ctx.encode(cj)?);
    let verdict = subsumes(&a, &b)?;
    if verdict == Subsumption::Unknown {
        return Ok(Comparison::Unknown);
    }
    if (verdict == Subsumption::Holds) == oracle.holds() {
        return Ok(Comparison::Agreement);
    }
    let kind = if has_empty_existential(&a) || has_empty_existential(&b) {
        KIND_INCOMPLETE
    } else {
        KIND_SUBSUMPTION
    };
    Ok(Comparison::Disagreement(Discrepancy {
        kind,
        inputs: format!("{ci} <= {cj}"),
        encoder: format!("{verdict} ({a} vs {b})"),
        oracle: oracle.to_string(),
        witness: match &oracle {
            OracleVerdict::Refuted(w) => w.to_string(),
            OracleVerdict::Holds { .. } => "-".into(),
        },
    }))
}

/// Random propositional subsumption pairs plus exhaustive lcs and sampled fcg
/// comparisons. When roles exist, bounded role-mode trials are added,
/// including existentials with an unsatisfiable filler.
pub fn cross_check(tbox: &TBox, trials: usize, seed: u64) -> Result<CrossCheckReport> {
    let ctx = EncodingContext::new(tbox)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrossCheckReport::default();
    let mut pairs = Vec::new();

    for _ in 0..trials {
        let a = random_expr(&mut rng, tbox, 2, false);
        let x = random_expr(&mut rng, tbox, 1, false);
        let (ci, cj) = match rng.random_range(0..3) {
            0 => (a.clone(), ConceptExpr::or(a, x)),
            1 => (ConceptExpr::and(a.clone(), x), a),
            _ => (a, random_expr(&mut rng, tbox, 2, false)),
        };
        pairs.push((ci, cj));
    }

    let roles = tbox.atomic_roles();
    if !roles.is_empty() {
        let atoms = tbox.atomic_concepts();
        for t in 0..(trials / 10).max(1) {
            let r = RoleExpr::atomic(roles[t % roles.len()].clone());
            let a = ConceptExpr::atomic(atoms[rng.random_range(0..atoms.len())].clone());
            let empty = ConceptExpr::some(r, ConceptExpr::Bottom);
            pairs.push((empty, a));
            let other = random_expr(&mut rng, tbox, 2, true);
            pairs.push((other, random_expr(&mut rng, tbox, 1, true)));
        }
    }

    // pairs are drawn sequentially and judged in parallel; results merge in draw order
    let outcomes: Vec<Comparison> = pairs
        .par_iter()
        .map(|(ci, cj)| compare_subsumption(&ctx, ci, cj))
        .collect::<Result<_>>()?;
    for outcome in outcomes {
        match outcome {
            Comparison::Skipped => {
                report.skipped += 1;
                continue;
            }
            Comparison::Unknown => report.unknown += 1,
            Comparison::Agreement => report.agreements += 1,
            Comparison::Disagreement(d) => report.discrepancies.push(d),
        }
        report.subsumption_trials += 1;
    }

    let names = tbox.atomic_concepts();
    for a in names {
        for b in names {
            report.lcs_pairs += 1;
            let (got, want) = (lcs_atomic(a, b, &ctx)?, lcs_by_ancestors(a, b, &ctx)?);
            if got != want {
                report.discrepancies.push(Discrepancy {
                    kind: KIND_LCS,
                    inputs: format!("{a}, {b}"),
                    encoder: got.to_string(),
                    oracle: want.to_string(),
                    witness: "-".into(),
                });
            }
        }
    }

    let width = ctx.concept_width().min(PROPOSITIONAL_CAP);
    for t in 0..trials.min(200) {
        let encoded = if t % 2 == 0 && ctx.concept_width() <= PROPOSITIONAL_CAP {
            // defined names may still bring restrictions in
            Some(ctx.encode(&random_expr(&mut rng, tbox, 3, false))?)
                .filter(|c| !has_segments_anywhere(c))
        } else {
            None
        };
        let code = match encoded {
            Some(c) => c,
            None => {
                let w = rng.random_range(1..=width);
                random_propositional_code(&mut rng, w)
            }
        };
        report.fcg_codes += 1;
        let (got, want) = (fcg(&code)?, fcg_enumerate(&code, PROPOSITIONAL_CAP)?);
        if got != want {
            report.discrepancies.push(Discrepancy {
                kind: KIND_FCG,
                inputs: code.to_string(),
                encoder: got.to_string(),
                oracle: want.to_string(),
                witness: "-".into(),
            });
        }
    }
    Ok(report)
}
