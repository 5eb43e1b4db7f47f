use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid literal: {0}")]
    Literal(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("relation not in language: {0}")]
    Language(String),
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not structure-preserving: {0}")]
    NotPreserving(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("pool too small: {0}")]
    PoolTooSmall(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
