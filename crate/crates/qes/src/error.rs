//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the solvers and their supporting operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A model parameter lies outside the domain of its family
    /// (for example C ≤ 0 where √C is required, or B = 0 in a divisor).
    #[error("domain error: {0}")]
    Domain(String),

    /// A recurrence weight vanished before the truncation index, so the
    /// polynomial ladder cannot advance.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
