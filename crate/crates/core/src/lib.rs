//! Algebraic bit-code encoding of ALCH+ concept definitions and the BitSim
//! similarity measure over those codes.

pub mod algebra;
pub mod dl;
pub mod encoder;
pub mod engine;
pub mod error;
pub mod gen;
pub mod oracle;
pub mod similarity;

pub use algebra::{verify_tables, AlgebraTables, Bit, QuantifierBit, RoleBit};
pub use dl::{parse_expr, parse_tbox, ConceptExpr, RoleExpr, TBox};
pub use encoder::{BitCode, EncodingContext, Op};
pub use error::{Error, Result};
pub use similarity::{sigma_hat, SimilarityConfig, SimilarityReport, Subsumption};
