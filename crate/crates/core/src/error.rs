use thiserror::Error;

/// Errors raised by the nelab core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NelabError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero vector has no support functional")]
    ZeroVector,

    #[error("scalar field mismatch: {0}")]
    FieldMismatch(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension cap exceeded: {dim} > {cap}")]
    CapExceeded { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, NelabError>;

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(NelabError::DimensionMismatch { expected, actual })
    }
}
