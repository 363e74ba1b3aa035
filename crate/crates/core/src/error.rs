//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible matrix/tensor/vector dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Non-finite values or a numeric routine that cannot proceed.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A matrix required to be positive definite failed factorization.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// Invalid configuration or argument values.
    #[error("configuration error: {0}")]
    Config(String),

    /// Labels unusable for supervised fitting (missing or degenerate classes).
    #[error("label error: {0}")]
    Labels(String),

    /// An index outside the valid range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A binary container or model file failed to parse.
    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
