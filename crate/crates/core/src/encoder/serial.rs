//! Text form of bit-codes, highest position first:
//!
//! ```text
//! code     := bits segment*
//! bits     := (bitchar | compound)+
//! compound := "(" ("U:" | "I:") code ("|" code)+ ")"
//! segment  := "[" ("A" | "E" | "X" | "y") "|" rolebits "|" code "]"
//! ```

use super::code::{BitCode, CompoundCode, Op, PositionValue, RestrictionSegment};
use crate::algebra::{Bit, QuantifierBit, RoleBit};
use crate::error::{Error, Result};

/// Parses a serialized code, checking widths against the given context sizes.
/// Errors carry the 0-based byte offset of the first offending byte.
pub fn deserialize_with_widths(
    text: &str,
    concept_width: usize,
    role_width: usize,
) -> Result<BitCode> {
    let mut r = Reader {
        bytes: text.as_bytes(),
        pos: 0,
        concept_width,
        role_width,
    };
    let code = r.code()?;
    if r.pos < r.bytes.len() {
        return Err(r.error("unexpected trailing input"));
    }
    if code.width() != concept_width {
        return Err(Error::MalformedCode {
            position: 0,
            message: format!(
                "code has width {}, context expects {concept_width}",
                code.width()
            ),
        });
    }
    Ok(code)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    concept_width: usize,
    role_width: usize,
}

impl Reader<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::MalformedCode {
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!(
                "expected `{}`, found `{}`",
                want as char, c as char
            ))),
            None => Err(self.error(format!("expected `{}`, found end of input", want as char))),
        }
    }

    fn code(&mut self) -> Result<BitCode> {
        let mut msb_first = Vec::new();
        loop {
            match self.peek() {
                Some(b'(') => msb_first.push(PositionValue::Compound(self.compound()?)),
                Some(c) => match Bit::from_char(c as char) {
                    Some(bit) => {
                        self.pos += 1;
                        msb_first.push(PositionValue::Plain(bit));
                    }
                    None => break,
                },
                None => break,
            }
        }
        if msb_first.is_empty() {
            return Err(self.error("expected a bit or compound"));
        }
        msb_first.reverse();
        let mut segments = Vec::new();
        while self.peek() == Some(b'[') {
            segments.push(self.segment()?);
        }
        Ok(BitCode {
            concept_bits: msb_first,
            segments,
        })
    }

    fn compound(&mut self) -> Result<CompoundCode> {
        self.expect(b'(')?;
        let op = match self.peek() {
            Some(b'U') => Op::Join,
            Some(b'I') => Op::Meet,
            _ => return Err(self.error("expected compound tag `U` or `I`")),
        };
        self.pos += 1;
        self.expect(b':')?;
        let start = self.pos;
        let mut operands = vec![self.code()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let at = self.pos;
            let operand = self.code()?;
            if operand.width() != operands[0].width() {
                return Err(Error::MalformedCode {
                    position: at,
                    message: format!(
                        "compound operand has width {}, expected {}",
                        operand.width(),
                        operands[0].width()
                    ),
                });
            }
            operands.push(operand);
        }
        if operands.len() < 2 {
            return Err(Error::MalformedCode {
                position: start,
                message: "compound needs at least two operands".into(),
            });
        }
        self.expect(b')')?;
        Ok(CompoundCode { op, operands })
    }

    fn segment(&mut self) -> Result<RestrictionSegment> {
        self.expect(b'[')?;
        let quantifier = self
            .peek()
            .and_then(|c| QuantifierBit::from_char(c as char))
            .ok_or_else(|| self.error("expected quantifier `A`, `E`, `X` or `y`"))?;
        self.pos += 1;
        self.expect(b'|')?;
        let mut role_code = Vec::new();
        while let Some(r) = self.peek().and_then(|c| RoleBit::from_char(c as char)) {
            role_code.push(r);
            self.pos += 1;
        }
        if role_code.len() != self.role_width {
            return Err(self.error(format!(
                "role code has width {}, expected {}",
                role_code.len(),
                self.role_width
            )));
        }
        role_code.reverse();
        self.expect(b'|')?;
        let at = self.pos;
        let filler = self.code()?;
        if filler.width() != self.concept_width {
            return Err(Error::MalformedCode {
                position: at,
                message: format!(
                    "filler has width {}, expected {}",
                    filler.width(),
                    self.concept_width
                ),
            });
        }
        self.expect(b']')?;
        Ok(RestrictionSegment {
            quantifier,
            role_code,
            filler,
        })
    }
}
