//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("split label unsupported: {0}")]
    SplitLabelUnsupported(String),
    #[error("branching would produce an equal-component pair: {0}")]
    SplitLabelWouldArise(String),
    #[error("inner-product hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("element not in W(D_n): odd number of sign changes")]
    NotInD,
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("exact integer overflow: {0}")]
    Overflow(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
