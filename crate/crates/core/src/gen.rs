//! Seeded random terminologies, expressions and codes for property trials.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::algebra::Bit;
use crate::dl::{ConceptExpr, RoleExpr, TBox};
use crate::encoder::{BitCode, Op};

/// A random DAG over `atoms` concepts `C0..` and `roles` roles `r0..`.
/// Each concept gets up to two parents among the earlier ones.
pub fn random_tbox<R: Rng>(rng: &mut R, atoms: usize, roles: usize) -> TBox {
    let mut t = TBox::new();
    for i in 0..atoms {
        let name = format!("C{i}");
        t.add_concept(&name).expect("fresh name");
        if i == 0 {
            continue;
        }
        let parents = rng.random_range(0..=2usize.min(i));
        for _ in 0..parents {
            let p = rng.random_range(0..i);
            t.add_inclusion(&name, &format!("C{p}"))
                .expect("edges point to earlier names");
        }
    }
    for i in 0..roles {
        let name = format!("r{i}");
        t.add_role(&name);
        if i > 0 && rng.random_bool(0.3) {
            let p = rng.random_range(0..i);
            t.add_role_inclusion(&name, &format!("r{p}"))
                .expect("edges point to earlier roles");
        }
    }
    t
}

fn random_role<R: Rng>(rng: &mut R, tbox: &TBox) -> RoleExpr {
    let names = tbox.atomic_roles();
    let pick = |rng: &mut R| RoleExpr::atomic(names.choose(rng).expect("roles present").clone());
    match rng.random_range(0..6) {
        0 => RoleExpr::union(pick(rng), pick(rng)),
        1 => RoleExpr::intersection(pick(rng), pick(rng)),
        _ => pick(rng),
    }
}

/// A random expression over the TBox's names of depth at most `depth`.
/// Restrictions appear only when `with_roles` is set and roles exist.
pub fn random_expr<R: Rng>(
    rng: &mut R,
    tbox: &TBox,
    depth: usize,
    with_roles: bool,
) -> ConceptExpr {
    let names = tbox.concept_names();
    let leaf = |rng: &mut R| match rng.random_range(0..20) {
        0 => ConceptExpr::Top,
        1 => ConceptExpr::Bottom,
        _ => ConceptExpr::atomic(names.choose(rng).expect("concepts present").clone()),
    };
    if depth == 0 || rng.random_bool(0.3) {
        return leaf(rng);
    }
    let roles = with_roles && !tbox.atomic_roles().is_empty();
    let kinds = if roles { 5 } else { 3 };
    match rng.random_range(0..kinds) {
        0 => ConceptExpr::not(random_expr(rng, tbox, depth - 1, with_roles)),
        1 => ConceptExpr::and(
            random_expr(rng, tbox, depth - 1, with_roles),
            random_expr(rng, tbox, depth - 1, with_roles),
        ),
        2 => ConceptExpr::or(
            random_expr(rng, tbox, depth - 1, with_roles),
            random_expr(rng, tbox, depth - 1, with_roles),
        ),
        3 => ConceptExpr::all(
            random_role(rng, tbox),
            random_expr(rng, tbox, depth - 1, with_roles),
        ),
        _ => ConceptExpr::some(
            random_role(rng, tbox),
            random_expr(rng, tbox, depth - 1, with_roles),
        ),
    }
}

const NON_EXTREME: [Bit; 9] = [
    Bit::Zero,
    Bit::One,
    Bit::X,
    Bit::XPrime,
    Bit::XDPrime,
    Bit::Y,
    Bit::YPrime,
    Bit::TopPrime,
    Bit::BotPrime,
];

/// A random plain code of the given width, without ⊤ or ⊥ bits.
pub fn random_plain_code<R: Rng>(rng: &mut R, width: usize) -> BitCode {
    BitCode::from_bits((0..width).map(|_| *NON_EXTREME.choose(rng).expect("non-empty")))
}

/// A random propositional code: plain, or a compound of two or three plain
/// codes, possibly nested one level.
pub fn random_propositional_code<R: Rng>(rng: &mut R, width: usize) -> BitCode {
    fn compound<R: Rng>(rng: &mut R, width: usize, nest: bool) -> BitCode {
        let op = if rng.random_bool(0.5) {
            Op::Join
        } else {
            Op::Meet
        };
        let n = rng.random_range(2..=3);
        let operands = (0..n)
            .map(|_| {
                if nest && rng.random_bool(0.3) {
                    compound(rng, width, false)
                } else {
                    random_plain_code(rng, width)
                }
            })
            .collect();
        BitCode::compound(op, operands)
    }
    if rng.random_bool(0.4) {
        random_plain_code(rng, width)
    } else {
        compound(rng, width, true)
    }
}

/// A random 0/1 code, the shape atomic codes take.
pub fn random_binary_code<R: Rng>(rng: &mut R, width: usize, density: f64) -> BitCode {
    BitCode::from_bits((0..width).map(|_| {
        if rng.random_bool(density) {
            Bit::One
        } else {
            Bit::Zero
        }
    }))
}
