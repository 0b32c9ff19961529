use thiserror::Error;

/// A parse failure with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error("unknown function name `{name}` at {line}:{column}")]
    UnknownFunction {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("cycle in concept hierarchy through `{0}`")]
    ConceptCycle(String),
    #[error("cycle in role hierarchy through `{0}`")]
    RoleCycle(String),
    #[error("undeclared name `{0}`")]
    Undeclared(String),
    #[error("undeclared role `{0}`")]
    UndeclaredRole(String),
    #[error("duplicate definition of `{0}`")]
    DuplicateDefinition(String),
    #[error("`{0}` is both defined and declared atomic")]
    DefinitionClash(String),
    #[error("`{0}` is not an atomic concept")]
    NotAtomic(String),
    #[error("malformed bit-code at byte {position}: {message}")]
    MalformedCode { position: usize, message: String },
    #[error("codes come from different encoding contexts ({0})")]
    ContextMismatch(String),
    #[error("similarity undefined: {0}")]
    Undefined(String),
    #[error("enumeration cap exceeded: {size} > {cap}")]
    EnumerationCap { size: usize, cap: usize },
    #[error("unsupported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("encoding context has no atomic concepts")]
    EmptyContext,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
