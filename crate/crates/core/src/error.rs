use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("function undefined on spectrum: {0}")]
    Domain(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("irreducible decomposition failed to separate after {0} random draws; reseed")]
    RetryExhausted(usize),

    #[error("numerical representation data inconsistent: {0}")]
    NumericalIrrep(String),

    #[error("fusion ring invalid: {0}")]
    Fusion(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
