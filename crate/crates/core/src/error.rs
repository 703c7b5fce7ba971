use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical pipeline and its front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix or vector did not have the dimensions an operation needs.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition (Hermiticity, positivity, closure, ...) failed.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A sweep configuration could not be parsed or is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
