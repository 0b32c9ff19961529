//! The eleven-symbol bit alphabet and its operator tables.
//!
//! Join, meet and negation are total Cayley tables computed at compile time.
//! The specificity order is a separate structure (the reflexive-transitive
//! closure of a fixed Hasse diagram); the operators are not its lattice
//! join/meet.

use std::fmt;

/// One symbol of the bit alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Bit {
    /// Potential bit; generates every other symbol.
    Zero = 0,
    /// Property bit.
    One,
    X,
    XPrime,
    XDPrime,
    Y,
    YPrime,
    TopPrime,
    BotPrime,
    Top,
    Bot,
}

pub const BIT_COUNT: usize = 11;

impl Bit {
    pub const ALL: [Bit; BIT_COUNT] = [
        Bit::Zero,
        Bit::One,
        Bit::X,
        Bit::XPrime,
        Bit::XDPrime,
        Bit::Y,
        Bit::YPrime,
        Bit::TopPrime,
        Bit::BotPrime,
        Bit::Top,
        Bit::Bot,
    ];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub const fn from_index(i: usize) -> Bit {
        Bit::ALL[i]
    }

    pub const fn to_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
            Bit::X => 'X',
            Bit::XPrime => 'x',
            Bit::XDPrime => 'N',
            Bit::Y => 'Y',
            Bit::YPrime => 'y',
            Bit::TopPrime => 't',
            Bit::BotPrime => 'f',
            Bit::Top => 'T',
            Bit::Bot => 'F',
        }
    }

    pub const fn from_char(c: char) -> Option<Bit> {
        Some(match c {
            '0' => Bit::Zero,
            '1' => Bit::One,
            'X' => Bit::X,
            'x' => Bit::XPrime,
            'N' => Bit::XDPrime,
            'Y' => Bit::Y,
            'y' => Bit::YPrime,
            't' => Bit::TopPrime,
            'f' => Bit::BotPrime,
            'T' => Bit::Top,
            'F' => Bit::Bot,
            _ => return None,
        })
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Bit {
        CANONICAL.neg[self.index()]
    }

    #[inline]
    pub fn join(self, other: Bit) -> Bit {
        CANONICAL.join[self.index()][other.index()]
    }

    #[inline]
    pub fn meet(self, other: Bit) -> Bit {
        CANONICAL.meet[self.index()][other.index()]
    }

    /// Specificity order: `a.leq(b)` when `a` is at least as specific as `b`.
    #[inline]
    pub fn leq(self, other: Bit) -> bool {
        CANONICAL.leq[self.index()][other.index()]
    }

    #[inline]
    pub fn hasse_distance(self, other: Bit) -> u8 {
        CANONICAL.hasse_dist[self.index()][other.index()]
    }

    pub const fn is_extreme(self) -> bool {
        matches!(self, Bit::Top | Bit::Bot)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Quantifier symbols carried by restriction segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantifierBit {
    /// Written `1` in the algebra, `A` in serialized codes.
    Forall,
    /// Written `0` in the algebra, `E` in serialized codes.
    Exists,
    X,
    YPrime,
}

impl QuantifierBit {
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> QuantifierBit {
        match self {
            QuantifierBit::Forall => QuantifierBit::Exists,
            QuantifierBit::Exists => QuantifierBit::Forall,
            QuantifierBit::X => QuantifierBit::YPrime,
            QuantifierBit::YPrime => QuantifierBit::X,
        }
    }

    pub fn as_bit(self) -> Bit {
        match self {
            QuantifierBit::Forall => Bit::One,
            QuantifierBit::Exists => Bit::Zero,
            QuantifierBit::X => Bit::X,
            QuantifierBit::YPrime => Bit::YPrime,
        }
    }

    pub fn from_bit(b: Bit) -> Option<QuantifierBit> {
        match b {
            Bit::One => Some(QuantifierBit::Forall),
            Bit::Zero => Some(QuantifierBit::Exists),
            Bit::X => Some(QuantifierBit::X),
            Bit::YPrime => Some(QuantifierBit::YPrime),
            _ => None,
        }
    }

    pub fn join(self, other: QuantifierBit) -> QuantifierBit {
        // closed: {1,0,X,Y'} is a sub-algebra of the join/meet tables
        QuantifierBit::from_bit(self.as_bit().join(other.as_bit())).expect("quantifier closure")
    }

    pub fn meet(self, other: QuantifierBit) -> QuantifierBit {
        QuantifierBit::from_bit(self.as_bit().meet(other.as_bit())).expect("quantifier closure")
    }

    pub fn to_char(self) -> char {
        match self {
            QuantifierBit::Forall => 'A',
            QuantifierBit::Exists => 'E',
            QuantifierBit::X => 'X',
            QuantifierBit::YPrime => 'y',
        }
    }

    pub fn from_char(c: char) -> Option<QuantifierBit> {
        match c {
            'A' => Some(QuantifierBit::Forall),
            'E' => Some(QuantifierBit::Exists),
            'X' => Some(QuantifierBit::X),
            'y' => Some(QuantifierBit::YPrime),
            _ => None,
        }
    }
}

/// Role-code symbols. No negation is defined on roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoleBit {
    One,
    Zero,
    X,
    YPrime,
}

impl RoleBit {
    pub fn as_bit(self) -> Bit {
        match self {
            RoleBit::One => Bit::One,
            RoleBit::Zero => Bit::Zero,
            RoleBit::X => Bit::X,
            RoleBit::YPrime => Bit::YPrime,
        }
    }

    pub fn from_bit(b: Bit) -> Option<RoleBit> {
        match b {
            Bit::One => Some(RoleBit::One),
            Bit::Zero => Some(RoleBit::Zero),
            Bit::X => Some(RoleBit::X),
            Bit::YPrime => Some(RoleBit::YPrime),
            _ => None,
        }
    }

    pub fn join(self, other: RoleBit) -> RoleBit {
        RoleBit::from_bit(self.as_bit().join(other.as_bit())).expect("role closure")
    }

    pub fn meet(self, other: RoleBit) -> RoleBit {
        RoleBit::from_bit(self.as_bit().meet(other.as_bit())).expect("role closure")
    }

    pub fn to_char(self) -> char {
        self.as_bit().to_char()
    }

    pub fn from_char(c: char) -> Option<RoleBit> {
        Bit::from_char(c).and_then(RoleBit::from_bit)
    }
}

/// Sentinel in `hasse_dist` for disconnected pairs.
pub const DISCONNECTED: u8 = u8::MAX;

/// Materialized operator and order tables, indexed by [`Bit::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraTables {
    pub join: [[Bit; BIT_COUNT]; BIT_COUNT],
    pub meet: [[Bit; BIT_COUNT]; BIT_COUNT],
    pub neg: [Bit; BIT_COUNT],
    pub leq: [[bool; BIT_COUNT]; BIT_COUNT],
    pub hasse_dist: [[u8; BIT_COUNT]; BIT_COUNT],
}

/// Covering pairs `(lower, upper)` of the specificity order.
pub const HASSE_EDGES: [(Bit, Bit); 13] = [
    (Bit::Bot, Bit::BotPrime),
    (Bit::BotPrime, Bit::YPrime),
    (Bit::BotPrime, Bit::Y),
    (Bit::YPrime, Bit::One),
    (Bit::Y, Bit::XDPrime),
    (Bit::Y, Bit::Zero),
    (Bit::One, Bit::Zero),
    (Bit::Zero, Bit::X),
    (Bit::Zero, Bit::XPrime),
    (Bit::XDPrime, Bit::XPrime),
    (Bit::X, Bit::TopPrime),
    (Bit::XPrime, Bit::TopPrime),
    (Bit::TopPrime, Bit::Top),
];

// Positive family Y' < 1 < X, negative family Y < X'' < X'.
const fn family(b: Bit) -> Option<(bool, u8)> {
    match b {
        Bit::YPrime => Some((true, 1)),
        Bit::One => Some((true, 2)),
        Bit::X => Some((true, 3)),
        Bit::Y => Some((false, 1)),
        Bit::XDPrime => Some((false, 2)),
        Bit::XPrime => Some((false, 3)),
        _ => None,
    }
}

const fn family_member(positive: bool, level: u8) -> Bit {
    match (positive, level) {
        (true, 1) => Bit::YPrime,
        (true, 2) => Bit::One,
        (true, _) => Bit::X,
        (false, 1) => Bit::Y,
        (false, 2) => Bit::XDPrime,
        (false, _) => Bit::XPrime,
    }
}

const fn canonical_neg(b: Bit) -> Bit {
    match b {
        Bit::Zero => Bit::Zero,
        Bit::One => Bit::XDPrime,
        Bit::XDPrime => Bit::One,
        Bit::X => Bit::Y,
        Bit::Y => Bit::X,
        Bit::YPrime => Bit::XPrime,
        Bit::XPrime => Bit::YPrime,
        Bit::TopPrime => Bit::BotPrime,
        Bit::BotPrime => Bit::TopPrime,
        Bit::Top => Bit::Bot,
        Bit::Bot => Bit::Top,
    }
}

const fn canonical_join(a: Bit, b: Bit) -> Bit {
    let (ai, bi) = (a as u8, b as u8);
    let (top, bot) = (Bit::Top as u8, Bit::Bot as u8);
    // the complementary extremes meet at the near-extremes so that b ⊓ ¬b ≠ ⊥ holds for ⊤ and ⊥ too
    if (ai == top && bi == bot) || (ai == bot && bi == top) {
        return Bit::TopPrime;
    }
    if ai == top || bi == top {
        return Bit::Top;
    }
    if ai == bot {
        return b;
    }
    if bi == bot {
        return a;
    }
    if ai == Bit::TopPrime as u8 || bi == Bit::TopPrime as u8 {
        return Bit::TopPrime;
    }
    if ai == Bit::BotPrime as u8 {
        return b;
    }
    if bi == Bit::BotPrime as u8 {
        return a;
    }
    let zero = Bit::Zero as u8;
    if ai == zero && bi == zero {
        return Bit::Zero;
    }
    match (family(a), family(b)) {
        (None, Some((pos, _))) | (Some((pos, _)), None) => family_member(pos, 3),
        (Some((pa, la)), Some((pb, lb))) => {
            if pa == pb {
                family_member(pa, if la > lb { la } else { lb })
            } else {
                Bit::TopPrime
            }
        }
        (None, None) => Bit::Zero,
    }
}

const fn build_canonical() -> AlgebraTables {
    let mut join = [[Bit::Zero; BIT_COUNT]; BIT_COUNT];
    let mut meet = [[Bit::Zero; BIT_COUNT]; BIT_COUNT];
    let mut neg = [Bit::Zero; BIT_COUNT];
    let mut i = 0;
    while i < BIT_COUNT {
        neg[i] = canonical_neg(Bit::ALL[i]);
        i += 1;
    }
    let mut i = 0;
    while i < BIT_COUNT {
        let mut j = 0;
        while j < BIT_COUNT {
            let a = Bit::ALL[i];
            let b = Bit::ALL[j];
            join[i][j] = canonical_join(a, b);
            // meet is the De Morgan dual of join
            meet[i][j] = canonical_neg(canonical_join(canonical_neg(a), canonical_neg(b)));
            j += 1;
        }
        i += 1;
    }

    let mut leq = [[false; BIT_COUNT]; BIT_COUNT];
    let mut adj = [[false; BIT_COUNT]; BIT_COUNT];
    let mut i = 0;
    while i < BIT_COUNT {
        leq[i][i] = true;
        i += 1;
    }
    let mut e = 0;
    while e < HASSE_EDGES.len() {
        let (lo, hi) = HASSE_EDGES[e];
        leq[lo as usize][hi as usize] = true;
        adj[lo as usize][hi as usize] = true;
        adj[hi as usize][lo as usize] = true;
        e += 1;
    }
    // Warshall closure
    let mut k = 0;
    while k < BIT_COUNT {
        let mut i = 0;
        while i < BIT_COUNT {
            let mut j = 0;
            while j < BIT_COUNT {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
                j += 1;
            }
            i += 1;
        }
        k += 1;
    }

    // undirected shortest paths (Floyd-Warshall over the Hasse graph)
    let mut dist = [[DISCONNECTED; BIT_COUNT]; BIT_COUNT];
    let mut i = 0;
    while i < BIT_COUNT {
        let mut j = 0;
        while j < BIT_COUNT {
            if i == j {
                dist[i][j] = 0;
            } else if adj[i][j] {
                dist[i][j] = 1;
            }
            j += 1;
        }
        i += 1;
    }
    let mut k = 0;
    while k < BIT_COUNT {
        let mut i = 0;
        while i < BIT_COUNT {
            let mut j = 0;
            while j < BIT_COUNT {
                if dist[i][k] != DISCONNECTED && dist[k][j] != DISCONNECTED {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
                j += 1;
            }
            i += 1;
        }
        k += 1;
    }

    AlgebraTables {
        join,
        meet,
        neg,
        leq,
        hasse_dist: dist,
    }
}

static CANONICAL: AlgebraTables = build_canonical();

impl AlgebraTables {
    /// The shipped tables.
    pub fn canonical() -> &'static AlgebraTables {
        &CANONICAL
    }

    fn j(&self, a: Bit, b: Bit) -> Bit {
        self.join[a.index()][b.index()]
    }

    fn m(&self, a: Bit, b: Bit) -> Bit {
        self.meet[a.index()][b.index()]
    }

    fn n(&self, a: Bit) -> Bit {
        self.neg[a.index()]
    }

    fn le(&self, a: Bit, b: Bit) -> bool {
        self.leq[a.index()][b.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCheck {
    pub name: String,
    pub passed: bool,
    /// First counterexample, when the check failed.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(ConstraintCheck {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure,
        });
    }

    fn identity(&mut self, name: &str, got: Bit, want: Bit) {
        let failure = (got != want).then(|| format!("expected {want}, found {got}"));
        self.push(name, failure);
    }
}

fn first_pair(pred: impl Fn(Bit, Bit) -> Option<String>) -> Option<String> {
    Bit::ALL
        .iter()
        .flat_map(|&a| Bit::ALL.iter().map(move |&b| (a, b)))
        .find_map(|(a, b)| pred(a, b))
}

fn first_single(pred: impl Fn(Bit) -> Option<String>) -> Option<String> {
    Bit::ALL.iter().find_map(|&b| pred(b))
}

/// The complementary extremes are the one pair where ⊤/⊥ absorption and
/// bound soundness give way to `b ⊓ ¬b ≠ ⊥`.
fn complementary_extremes(a: Bit, b: Bit) -> bool {
    matches!((a, b), (Bit::Top, Bit::Bot) | (Bit::Bot, Bit::Top))
}

/// Checks every algebraic constraint the encoder relies on.
pub fn verify_tables(t: &AlgebraTables) -> ConstraintReport {
    use Bit::*;
    let mut r = ConstraintReport::default();

    let mut chars: Vec<char> = Bit::ALL.iter().map(|b| b.to_char()).collect();
    chars.sort_unstable();
    chars.dedup();
    let roundtrip = Bit::ALL
        .iter()
        .all(|&b| Bit::from_char(b.to_char()) == Some(b));
    r.push(
        "alphabet has 11 symbols with a character bijection",
        (chars.len() != BIT_COUNT || !roundtrip)
            .then(|| "character map is not a bijection".to_string()),
    );

    r.identity("generator identity J1 (X = 1 join 0)", t.j(One, Zero), X);
    r.identity(
        "generator identity J2 (X' = X'' join 0)",
        t.j(XDPrime, Zero),
        XPrime,
    );
    r.identity(
        "generator identity J3 (T' = Y join Y')",
        t.j(Y, YPrime),
        TopPrime,
    );
    r.identity(
        "generator identity M1 (Y' = 1 meet 0)",
        t.m(One, Zero),
        YPrime,
    );
    r.identity(
        "generator identity M2 (Y = X'' meet 0)",
        t.m(XDPrime, Zero),
        Y,
    );
    r.identity(
        "generator identity M3 (F' = X meet X')",
        t.m(X, XPrime),
        BotPrime,
    );
    r.identity("negation identity (X'' = neg 1)", t.n(One), XDPrime);
    r.identity("zero negation fixpoint (neg 0 = 0)", t.n(Zero), Zero);
    r.identity("negation observation (X = neg Y)", t.n(Y), X);
    r.identity("negation observation (X' = neg Y')", t.n(YPrime), XPrime);
    r.identity(
        "negation observation (T' = neg F')",
        t.n(BotPrime),
        TopPrime,
    );
    r.identity("negation observation (T = neg F)", t.n(Bot), Top);

    r.push(
        "join commutative",
        first_pair(|a, b| {
            (t.j(a, b) != t.j(b, a)).then(|| format!("join({a},{b}) != join({b},{a})"))
        }),
    );
    r.push(
        "meet commutative",
        first_pair(|a, b| {
            (t.m(a, b) != t.m(b, a)).then(|| format!("meet({a},{b}) != meet({b},{a})"))
        }),
    );
    r.push(
        "join idempotent",
        first_single(|a| (t.j(a, a) != a).then(|| format!("join({a},{a}) = {}", t.j(a, a)))),
    );
    r.push(
        "meet idempotent",
        first_single(|a| (t.m(a, a) != a).then(|| format!("meet({a},{a}) = {}", t.m(a, a)))),
    );
    r.push(
        "negation involutive",
        first_single(|a| (t.n(t.n(a)) != a).then(|| format!("neg(neg({a})) = {}", t.n(t.n(a))))),
    );
    r.push(
        "De Morgan",
        first_pair(|a, b| {
            let dual = t.n(t.j(t.n(a), t.n(b)));
            (t.m(a, b) != dual)
                .then(|| format!("meet({a},{b}) = {} but dual gives {dual}", t.m(a, b)))
        }),
    );
    r.push(
        "complement meet is never bottom",
        first_single(|a| (t.m(a, t.n(a)) == Bot).then(|| format!("meet({a}, neg {a}) = F"))),
    );

    r.push(
        "order reflexive",
        first_single(|a| (!t.le(a, a)).then(|| format!("{a} not <= {a}"))),
    );
    r.push(
        "order antisymmetric",
        first_pair(|a, b| {
            (a != b && t.le(a, b) && t.le(b, a)).then(|| format!("{a} <= {b} <= {a}"))
        }),
    );
    r.push(
        "order transitive",
        first_pair(|a, b| {
            Bit::ALL
                .iter()
                .find(|&&c| t.le(a, b) && t.le(b, c) && !t.le(a, c))
                .map(|c| format!("{a} <= {b} <= {c} but not {a} <= {c}"))
        }),
    );
    r.push(
        "join is an upper bound",
        first_pair(|a, b| {
            let u = t.j(a, b);
            (!complementary_extremes(a, b) && !(t.le(a, u) && t.le(b, u)))
                .then(|| format!("join({a},{b}) = {u} is not above both"))
        }),
    );
    r.push(
        "meet is a lower bound",
        first_pair(|a, b| {
            let l = t.m(a, b);
            (!complementary_extremes(a, b) && !(t.le(l, a) && t.le(l, b)))
                .then(|| format!("meet({a},{b}) = {l} is not below both"))
        }),
    );
    r.push(
        "top absorbs join and is the meet identity",
        first_single(|a| {
            (!complementary_extremes(Top, a) && (t.j(Top, a) != Top || t.m(Top, a) != a))
                .then(|| format!("top misbehaves against {a}"))
        }),
    );
    r.push(
        "bottom absorbs meet and is the join identity",
        first_single(|a| {
            (!complementary_extremes(Bot, a) && (t.m(Bot, a) != Bot || t.j(Bot, a) != a))
                .then(|| format!("bottom misbehaves against {a}"))
        }),
    );

    let small = [One, Zero, X, YPrime];
    r.push(
        "role alphabet closed under join and meet",
        small
            .iter()
            .flat_map(|&a| small.iter().map(move |&b| (a, b)))
            .find_map(|(a, b)| {
                (!small.contains(&t.j(a, b)) || !small.contains(&t.m(a, b)))
                    .then(|| format!("{a},{b} leaves the role alphabet"))
            }),
    );
    r.identity("quantifier identity (X = 1 join 0)", t.j(One, Zero), X);
    r.identity(
        "quantifier identity (Y' = 1 meet 0)",
        t.m(One, Zero),
        YPrime,
    );

    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use Bit::*;

    #[test]
    fn canonical_tables_pass_every_constraint() {
        let report = verify_tables(AlgebraTables::canonical());
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn negation_examples() {
        assert_eq!(Zero.neg(), Zero);
        assert_eq!(One.neg(), XDPrime);
        assert_eq!(X.neg().neg(), X);
        assert_eq!(Y.neg(), X);
        assert_eq!(YPrime.neg(), XPrime);
        assert_eq!(BotPrime.neg(), TopPrime);
        assert_eq!(Bot.neg(), Top);
    }

    #[test]
    fn join_examples() {
        assert_eq!(One.join(Zero), X);
        assert_eq!(Y.join(YPrime), TopPrime);
        assert_eq!(X.join(X), X);
        assert_eq!(One.join(XDPrime), TopPrime);
        assert_eq!(YPrime.join(Zero), X);
        assert_eq!(Y.join(Zero), XPrime);
    }

    #[test]
    fn meet_examples() {
        assert_eq!(One.meet(Zero), YPrime);
        assert_eq!(X.meet(XPrime), BotPrime);
        assert_eq!(One.meet(One.neg()), BotPrime);
        assert_ne!(One.meet(One.neg()), Bot);
        assert_eq!(XDPrime.meet(Zero), Y);
    }

    #[test]
    fn extremes() {
        assert_eq!(Top.join(One), Top);
        assert_eq!(Top.meet(One), One);
        assert_eq!(Bot.meet(X), Bot);
        assert_eq!(Bot.join(X), X);
        assert_eq!(Top.meet(Bot), BotPrime);
        assert_eq!(Top.join(Bot), TopPrime);
    }

    #[test]
    fn order_examples() {
        assert!(One.leq(Zero));
        assert!(!Zero.leq(One));
        for b in Bit::ALL {
            assert!(b.leq(b));
            assert!(Bot.leq(b));
            assert!(b.leq(Top));
        }
        assert!(!Zero.leq(XDPrime));
    }

    #[test]
    fn hasse_distances() {
        assert_eq!(One.hasse_distance(Zero), 1);
        assert_eq!(One.hasse_distance(X), 2);
        assert_eq!(YPrime.hasse_distance(X), 3);
        assert_eq!(YPrime.hasse_distance(Zero), 2);
        for a in Bit::ALL {
            for b in Bit::ALL {
                assert_ne!(a.hasse_distance(b), DISCONNECTED);
                assert_eq!(a.hasse_distance(b), b.hasse_distance(a));
            }
        }
    }

    #[test]
    fn broken_join_is_reported() {
        let mut t = AlgebraTables::canonical().clone();
        t.join[One.index()][Zero.index()] = One;
        let report = verify_tables(&t);
        let c = report.find("generator identity J1 (X = 1 join 0)").unwrap();
        assert!(!c.passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn broken_zero_negation_is_reported() {
        let mut t = AlgebraTables::canonical().clone();
        t.neg[Zero.index()] = One;
        let report = verify_tables(&t);
        assert!(
            !report
                .find("zero negation fixpoint (neg 0 = 0)")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn quantifiers_and_roles() {
        assert_eq!(QuantifierBit::Forall.neg(), QuantifierBit::Exists);
        assert_eq!(QuantifierBit::YPrime.neg(), QuantifierBit::X);
        assert_eq!(
            QuantifierBit::Forall.join(QuantifierBit::Exists),
            QuantifierBit::X
        );
        assert_eq!(
            QuantifierBit::Forall.meet(QuantifierBit::Exists),
            QuantifierBit::YPrime
        );
        assert_eq!(RoleBit::One.join(RoleBit::Zero), RoleBit::X);
        assert_eq!(RoleBit::One.meet(RoleBit::Zero), RoleBit::YPrime);
        for q in [
            QuantifierBit::Forall,
            QuantifierBit::Exists,
            QuantifierBit::X,
            QuantifierBit::YPrime,
        ] {
            assert_eq!(QuantifierBit::from_char(q.to_char()), Some(q));
            assert_eq!(q.neg().neg(), q);
        }
    }

    #[test]
    fn char_bijection() {
        for b in Bit::ALL {
            assert_eq!(Bit::from_char(b.to_char()), Some(b));
            assert_eq!(Bit::from_index(b.index()), b);
        }
        assert_eq!(Bit::from_char('?'), None);
    }
}
