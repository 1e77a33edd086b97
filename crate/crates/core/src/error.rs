//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input file; carries the 1-based line number when known.
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        msg: String,
    },

    /// Data that parsed but violates a contract (dangling ids, bad ranges,
    /// inconsistent configuration).
    #[error("invalid data: {0}")]
    Invalid(String),

    /// Shape or alignment mismatch in a numeric operation.
    #[error("shape error in {op}: {msg}")]
    Shape { op: &'static str, msg: String },

    /// An operation produced NaN or infinity.
    #[error("non-finite values produced by {op}")]
    NonFinite { op: &'static str },

    /// Numeric failures that are not shape errors (zero-norm vectors,
    /// fully-masked softmax rows, divergence).
    #[error("numeric: {0}")]
    Numeric(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn checkpoint(msg: impl Into<String>) -> Self {
        Error::Checkpoint(msg.into())
    }

    pub fn malformed(path: &std::path::Path, line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.display().to_string(),
            line,
            msg: msg.into(),
        }
    }
}
