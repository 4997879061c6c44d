use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input (partitions, diagrams, scalars).
    #[error("parse error: {0}")]
    Parse(String),
    /// Inputs outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A bead move whose endpoints are out of range or collide.
    #[error("illegal move: {0}")]
    IllegalMove(String),
    /// An operation was called with arguments that make no sense together.
    #[error("usage error: {0}")]
    Usage(String),
    /// A self-check failed; always a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}

macro_rules! illegal {
    ($($arg:tt)*) => { $crate::error::Error::IllegalMove(format!($($arg)*)) };
}

pub(crate) use domain;
pub(crate) use illegal;
