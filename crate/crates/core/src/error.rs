use thiserror::Error;

/// Every failure the library reports. The variants map one to one onto the
/// command-line exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("wrong key: {0}")]
    WrongKey(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("input {0} lies outside the permutation domain")]
    OutOfDomain(String),
    #[error("attack failed: {0}")]
    AttackFailed(String),
}

impl Error {
    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
