//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SsnalError {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("operation not supported by this operator backend: {0}")]
    Capability(&'static str),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem validation failed: {0}")]
    Validation(String),

    #[error("Cholesky factorization failed at pivot {pivot} (matrix not numerically positive definite)")]
    CholeskyFailure { pivot: usize },

    #[error("line search failed after {backtracks} backtracks (non-descent direction)")]
    LineSearchFailure { backtracks: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported cache format: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SsnalError>;

impl SsnalError {
    pub(crate) fn dims(expected: usize, got: usize, context: &'static str) -> Self {
        SsnalError::DimensionMismatch {
            expected,
            got,
            context,
        }
    }
}
