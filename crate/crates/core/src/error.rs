use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A construction parameter (sieve limit, truncation bound, ...) is out of range.
    #[error("configuration error: {0}")]
    Config(String),
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input is valid but too large for the requested evaluation strategy.
    #[error("size error: {0}")]
    Size(String),
    /// A checked identity or bound failed; the implementation is wrong.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
