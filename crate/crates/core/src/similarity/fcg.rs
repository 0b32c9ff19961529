//! Code-generativity: how many fully specified sign assignments a code covers.
//!
//! An assignment fixes every position to `+` (the property holds) or `−`
//! (it does not). Bit `k` of an assignment mask is set for `+` at position `k + 1`.

use crate::algebra::Bit;
use crate::encoder::{BitCode, Op, PositionValue};
use crate::error::{Error, Result};

pub const DEFAULT_FCG_CAP: usize = 20;

/// Signs a single bit admits, as (admits `+`, admits `−`).
pub fn bit_coverage(b: Bit) -> (bool, bool) {
    match b {
        Bit::One | Bit::YPrime => (true, false),
        Bit::XDPrime | Bit::Y => (false, true),
        Bit::Zero | Bit::X | Bit::XPrime | Bit::TopPrime | Bit::Top => (true, true),
        Bit::BotPrime | Bit::Bot => (false, false),
    }
}

fn check_fragment(code: &BitCode, cap: usize) -> Result<()> {
    fn has_segments(code: &BitCode) -> bool {
        code.has_segments()
            || code.concept_bits.iter().any(|p| match p {
                PositionValue::Plain(_) => false,
                PositionValue::Compound(c) => c.operands.iter().any(has_segments),
            })
    }
    if has_segments(code) {
        return Err(Error::UnsupportedFragment(
            "code-generativity needs a code without restriction segments".into(),
        ));
    }
    if code.width() > cap {
        return Err(Error::EnumerationCap {
            size: code.width(),
            cap,
        });
    }
    Ok(())
}

/// Number of sign assignments covered by `code`, with the default width cap.
pub fn fcg(code: &BitCode) -> Result<u64> {
    fcg_with_cap(code, DEFAULT_FCG_CAP)
}

pub fn fcg_with_cap(code: &BitCode, cap: usize) -> Result<u64> {
    check_fragment(code, cap)?;
    Ok(coverage(code).len() as u64)
}

/// The covered assignments, sorted and deduplicated.
pub fn coverage(code: &BitCode) -> Vec<u32> {
    // Positions are independent, so the cover is a product of per-position
    // (or per-compound-span) alternatives.
    let mut acc: Vec<u32> = vec![0];
    let mut offset = 0u32;
    for p in &code.concept_bits {
        let (choices, width): (Vec<u32>, usize) = match p {
            PositionValue::Plain(b) => {
                let (plus, minus) = bit_coverage(*b);
                let mut v = Vec::with_capacity(2);
                if minus {
                    v.push(0);
                }
                if plus {
                    v.push(1);
                }
                (v, 1)
            }
            PositionValue::Compound(c) => {
                let mut sets = c.operands.iter().map(coverage);
                let first = sets.next().unwrap_or_default();
                let set = sets.fold(first, |x, y| match c.op {
                    Op::Join => union(&x, &y),
                    Op::Meet => intersection(&x, &y),
                });
                (set, c.width())
            }
        };
        acc = acc
            .iter()
            .flat_map(|&lo| choices.iter().map(move |&hi| lo | (hi << offset)))
            .collect();
        offset += width as u32;
        if acc.is_empty() {
            break;
        }
    }
    acc.sort_unstable();
    acc.dedup();
    acc
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
