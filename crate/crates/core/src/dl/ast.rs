use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RoleExpr {
    Atomic(String),
    Union(Box<RoleExpr>, Box<RoleExpr>),
    Intersection(Box<RoleExpr>, Box<RoleExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConceptExpr {
    Atomic(String),
    Top,
    Bottom,
    Not(Box<ConceptExpr>),
    And(Box<ConceptExpr>, Box<ConceptExpr>),
    Or(Box<ConceptExpr>, Box<ConceptExpr>),
    All(RoleExpr, Box<ConceptExpr>),
    Some(RoleExpr, Box<ConceptExpr>),
}

impl RoleExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        RoleExpr::Atomic(name.into())
    }

    pub fn union(a: RoleExpr, b: RoleExpr) -> Self {
        RoleExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn intersection(a: RoleExpr, b: RoleExpr) -> Self {
        RoleExpr::Intersection(Box::new(a), Box::new(b))
    }

    pub fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            RoleExpr::Atomic(n) => {
                out.insert(n.clone());
            }
            RoleExpr::Union(a, b) | RoleExpr::Intersection(a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

impl ConceptExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        ConceptExpr::Atomic(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(e))
    }

    pub fn and(a: ConceptExpr, b: ConceptExpr) -> Self {
        ConceptExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ConceptExpr, b: ConceptExpr) -> Self {
        ConceptExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn all(r: RoleExpr, c: ConceptExpr) -> Self {
        ConceptExpr::All(r, Box::new(c))
    }

    pub fn some(r: RoleExpr, c: ConceptExpr) -> Self {
        ConceptExpr::Some(r, Box::new(c))
    }

    /// True when the expression contains no role restriction.
    pub fn is_propositional(&self) -> bool {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => true,
            ConceptExpr::Not(e) => e.is_propositional(),
            ConceptExpr::And(a, b) | ConceptExpr::Or(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            ConceptExpr::All(..) | ConceptExpr::Some(..) => false,
        }
    }

    /// Concept names referenced anywhere in the expression.
    pub fn concept_names(&self, out: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Atomic(n) => {
                out.insert(n.clone());
            }
            ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(e) => e.concept_names(out),
            ConceptExpr::And(a, b) | ConceptExpr::Or(a, b) => {
                a.concept_names(out);
                b.concept_names(out);
            }
            ConceptExpr::All(_, c) | ConceptExpr::Some(_, c) => c.concept_names(out),
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<String>) {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::Not(e) => e.role_names(out),
            ConceptExpr::And(a, b) | ConceptExpr::Or(a, b) => {
                a.role_names(out);
                b.role_names(out);
            }
            ConceptExpr::All(r, c) | ConceptExpr::Some(r, c) => {
                r.names(out);
                c.role_names(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => 0,
            ConceptExpr::Not(e) => 1 + e.depth(),
            ConceptExpr::And(a, b) | ConceptExpr::Or(a, b) => 1 + a.depth().max(b.depth()),
            ConceptExpr::All(_, c) | ConceptExpr::Some(_, c) => 1 + c.depth(),
        }
    }
}

impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleExpr::Atomic(n) => write!(f, "{n}"),
            RoleExpr::Union(a, b) => write!(f, "runion({a}, {b})"),
            RoleExpr::Intersection(a, b) => write!(f, "rinter({a}, {b})"),
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptExpr::Atomic(n) => write!(f, "{n}"),
            ConceptExpr::Top => write!(f, "top"),
            ConceptExpr::Bottom => write!(f, "bot"),
            ConceptExpr::Not(e) => write!(f, "not({e})"),
            ConceptExpr::And(a, b) => write!(f, "and({a}, {b})"),
            ConceptExpr::Or(a, b) => write!(f, "or({a}, {b})"),
            ConceptExpr::All(r, c) => write!(f, "all({r}, {c})"),
            ConceptExpr::Some(r, c) => write!(f, "some({r}, {c})"),
        }
    }
}
