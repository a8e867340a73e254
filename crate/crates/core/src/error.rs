//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, TsfError>;

#[derive(Debug, Error)]
pub enum TsfError {
    /// Tensor extents do not conform for the requested operation.
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    Dim {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },

    /// Invalid model or data configuration (e.g. H not divisible by P).
    #[error("configuration error: {0}")]
    Config(String),

    /// Non-finite values where finite ones are required.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// An API contract was violated (e.g. backward on a non-scalar node).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Coordinates outside the valid patch/frame range.
    #[error("index out of range: {0}")]
    Index(String),

    /// Training diverged (non-finite loss).
    #[error("training error at epoch {epoch}: {msg}")]
    Training { epoch: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed checkpoint or clip file.
    #[error("format error: {0}")]
    Format(String),
}

impl TsfError {
    pub fn config(msg: impl Into<String>) -> Self {
        TsfError::Config(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        TsfError::Contract(msg.into())
    }
}
