//! ALCH+ abstract syntax, terminologies, and the text formats for both.

pub mod ast;
pub mod parser;
pub mod tbox;

pub use ast::{ConceptExpr, RoleExpr};
pub use parser::{parse_expr, parse_role};
pub use tbox::{parse_tbox, Hierarchy, TBox};
