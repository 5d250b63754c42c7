use thiserror::Error;

/// Failures reported by the library.
///
/// `Invalid` covers every precondition violation (the caller handed us
/// something outside an operation's domain). `Inconsistent` is reserved for
/// states that would contradict a theorem the implementation relies on, such
/// as a straightening system without a unique solution; seeing one is a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! reject {
    ($($arg:tt)*) => {
        return Err($crate::error::Error::Invalid(format!($($arg)*)))
    };
}

pub(crate) use reject;
