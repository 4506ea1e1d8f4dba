use thiserror::Error;

/// Errors raised by library operations.
///
/// Law violations are never errors: they are reported through
/// [`LawReport`](crate::report::LawReport) values instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("iteration bound exceeded: {0}")]
    Iteration(String),
    #[error("spaces are enriched in different quantales")]
    QuantaleMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
