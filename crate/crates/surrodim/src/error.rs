//! Crate-wide error type. Every fallible operation reports one of three
//! classes, which the command-line interface maps onto distinct exit codes.

use thiserror::Error;

/// Failure classes shared by the whole crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: unreadable documents, bad rationals, wrong arity.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code for the command-line interface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Precondition(_) => 3,
            Error::Invariant(_) => 4,
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
