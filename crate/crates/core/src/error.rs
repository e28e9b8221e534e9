use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chain size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("chain size {0} unsupported (must be in 1..={max})", max = crate::MAX_N)]
    ChainSize(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
