//! Recursive-descent parser for the prefix functional concept syntax.
//!
//! ```text
//! expr := name | "top" | "bot" | "not(" expr ")" | "and(" expr "," expr ")"
//!       | "or(" expr "," expr ")" | "all(" role "," expr ")" | "some(" role "," expr ")"
//! role := name | "runion(" role "," role ")" | "rinter(" role "," role ")"
//! ```

use super::ast::{ConceptExpr, RoleExpr};
use crate::error::{Error, ParseError, Result};

/// Words that cannot be used as concept or role names.
pub const RESERVED: &[&str] = &[
    "top", "bot", "not", "and", "or", "all", "some", "runion", "rinter", "concept", "role", "sub",
    "define",
];

// Nesting guard so adversarial input cannot overflow the stack.
const MAX_DEPTH: usize = 128;

pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_expr(text: &str) -> Result<ConceptExpr> {
    parse_expr_at(text, 1, 1)
}

/// Parses an expression whose first character sits at `line:column` of a larger file.
pub(crate) fn parse_expr_at(text: &str, line: usize, column: usize) -> Result<ConceptExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        col: column,
        depth: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected trailing `{}`", p.chars[p.pos])));
    }
    Ok(e)
}

pub fn parse_role(text: &str) -> Result<RoleExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        depth: 0,
    };
    let r = p.role()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected trailing `{}`", p.chars[p.pos])));
    }
    Ok(r)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    depth: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax(ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.pos)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    /// Reads an identifier and returns it with its start location.
    fn ident(&mut self) -> Result<(String, usize, usize)> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return Err(self.error(format!("expected a name, found `{c}`"))),
            None => return Err(self.error("expected a name, found end of input")),
        }
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok((s, line, col))
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<ConceptExpr> {
        self.enter()?;
        let (name, line, column) = self.ident()?;
        let call = self.peek() == Some('(');
        let e = match (name.as_str(), call) {
            ("top", false) => ConceptExpr::Top,
            ("bot", false) => ConceptExpr::Bottom,
            ("not", true) => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                ConceptExpr::not(e)
            }
            ("and" | "or", true) => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                if name == "and" {
                    ConceptExpr::and(a, b)
                } else {
                    ConceptExpr::or(a, b)
                }
            }
            ("all" | "some", true) => {
                self.expect('(')?;
                let r = self.role()?;
                self.expect(',')?;
                let c = self.expr()?;
                self.expect(')')?;
                if name == "all" {
                    ConceptExpr::all(r, c)
                } else {
                    ConceptExpr::some(r, c)
                }
            }
            (_, true) => return Err(Error::UnknownFunction { name, line, column }),
            (n, false) if RESERVED.contains(&n) => {
                return Err(self.error(format!("reserved word `{n}` used as a concept name")))
            }
            (_, false) => ConceptExpr::Atomic(name),
        };
        self.depth -= 1;
        Ok(e)
    }

    fn role(&mut self) -> Result<RoleExpr> {
        self.enter()?;
        let (name, line, column) = self.ident()?;
        let call = self.peek() == Some('(');
        let r = match (name.as_str(), call) {
            ("runion" | "rinter", true) => {
                self.expect('(')?;
                let a = self.role()?;
                self.expect(',')?;
                let b = self.role()?;
                self.expect(')')?;
                if name == "runion" {
                    RoleExpr::union(a, b)
                } else {
                    RoleExpr::intersection(a, b)
                }
            }
            (_, true) => return Err(Error::UnknownFunction { name, line, column }),
            (n, false) if RESERVED.contains(&n) => {
                return Err(self.error(format!("reserved word `{n}` used as a role name")))
            }
            (_, false) => RoleExpr::Atomic(name),
        };
        self.depth -= 1;
        Ok(r)
    }
}
