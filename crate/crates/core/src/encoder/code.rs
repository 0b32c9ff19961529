use std::fmt;

use crate::algebra::{Bit, QuantifierBit, RoleBit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Join,
    Meet,
}

impl Op {
    pub fn dual(self) -> Op {
        match self {
            Op::Join => Op::Meet,
            Op::Meet => Op::Join,
        }
    }

    pub fn apply(self, a: Bit, b: Bit) -> Bit {
        match self {
            Op::Join => a.join(b),
            Op::Meet => a.meet(b),
        }
    }

    pub(crate) fn tag(self) -> char {
        match self {
            Op::Join => 'U',
            Op::Meet => 'I',
        }
    }
}

/// A nested sub-code whose operands share one width.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompoundCode {
    pub op: Op,
    pub operands: Vec<BitCode>,
}

impl CompoundCode {
    pub fn width(&self) -> usize {
        self.operands.first().map_or(0, BitCode::width)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PositionValue {
    Plain(Bit),
    /// Spans as many positions as its operands are wide.
    Compound(CompoundCode),
}

impl PositionValue {
    pub fn width(&self) -> usize {
        match self {
            PositionValue::Plain(_) => 1,
            PositionValue::Compound(c) => c.width(),
        }
    }
}

/// Segment identity used for matching and merging: quantifier plus role code.
pub type SegmentKey = (QuantifierBit, Vec<RoleBit>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictionSegment {
    pub quantifier: QuantifierBit,
    /// Lowest role position first.
    pub role_code: Vec<RoleBit>,
    pub filler: BitCode,
}

impl RestrictionSegment {
    pub fn key(&self) -> SegmentKey {
        (self.quantifier, self.role_code.clone())
    }

    pub fn same_key(&self, other: &RestrictionSegment) -> bool {
        self.quantifier == other.quantifier && self.role_code == other.role_code
    }
}

/// A concept's bit-code. `concept_bits[0]` is position 1, the rightmost
/// character of the serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitCode {
    pub concept_bits: Vec<PositionValue>,
    pub segments: Vec<RestrictionSegment>,
}

impl BitCode {
    /// A code of plain bits given lowest position first.
    pub fn from_bits(bits: impl IntoIterator<Item = Bit>) -> BitCode {
        BitCode {
            concept_bits: bits.into_iter().map(PositionValue::Plain).collect(),
            segments: Vec::new(),
        }
    }

    pub fn top(width: usize) -> BitCode {
        BitCode::from_bits(std::iter::repeat_n(Bit::Top, width))
    }

    pub fn bottom(width: usize) -> BitCode {
        BitCode::from_bits(std::iter::repeat_n(Bit::Bot, width))
    }

    /// A code that is one compound over the whole width.
    pub fn compound(op: Op, operands: Vec<BitCode>) -> BitCode {
        BitCode {
            concept_bits: vec![PositionValue::Compound(CompoundCode { op, operands })],
            segments: Vec::new(),
        }
    }

    /// Number of concept positions covered.
    pub fn width(&self) -> usize {
        self.concept_bits.iter().map(PositionValue::width).sum()
    }

    fn all_bits(&self, want: Bit) -> bool {
        self.segments.is_empty()
            && self
                .concept_bits
                .iter()
                .all(|p| *p == PositionValue::Plain(want))
    }

    pub fn is_top(&self) -> bool {
        self.all_bits(Bit::Top)
    }

    pub fn is_bottom(&self) -> bool {
        self.all_bits(Bit::Bot)
    }

    pub fn is_canonical_extreme(&self) -> bool {
        self.is_top() || self.is_bottom()
    }

    /// The plain bits, lowest position first, if no position is compound.
    pub fn plain_bits(&self) -> Option<Vec<Bit>> {
        self.concept_bits
            .iter()
            .map(|p| match p {
                PositionValue::Plain(b) => Some(*b),
                PositionValue::Compound(_) => None,
            })
            .collect()
    }

    pub fn is_plain(&self) -> bool {
        self.concept_bits
            .iter()
            .all(|p| matches!(p, PositionValue::Plain(_)))
    }

    /// The compound, if this code is exactly one compound spanning every position.
    pub fn as_compound(&self) -> Option<&CompoundCode> {
        match self.concept_bits.as_slice() {
            [PositionValue::Compound(c)] if self.segments.is_empty() => Some(c),
            _ => None,
        }
    }

    /// Whether any compound occurs anywhere, fillers included.
    pub fn has_compound(&self) -> bool {
        !self.is_plain() || self.segments.iter().any(|s| s.filler.has_compound())
    }

    pub fn has_segments(&self) -> bool {
        !self.segments.is_empty()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out);
        out
    }

    pub(crate) fn write_to(&self, out: &mut String) {
        for p in self.concept_bits.iter().rev() {
            match p {
                PositionValue::Plain(b) => out.push(b.to_char()),
                PositionValue::Compound(c) => {
                    out.push('(');
                    out.push(c.op.tag());
                    out.push(':');
                    for (i, operand) in c.operands.iter().enumerate() {
                        if i > 0 {
                            out.push('|');
                        }
                        operand.write_to(out);
                    }
                    out.push(')');
                }
            }
        }
        for s in &self.segments {
            out.push('[');
            out.push(s.quantifier.to_char());
            out.push('|');
            out.extend(s.role_code.iter().rev().map(|r| r.to_char()));
            out.push('|');
            s.filler.write_to(out);
            out.push(']');
        }
    }
}

impl fmt::Display for BitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
