use thiserror::Error;

/// Failure modes shared by every checker in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("degenerate field: {0}")]
    DegenerateField(String),
    #[error("unsupported scenario: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
