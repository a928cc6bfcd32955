use thiserror::Error;

use crate::preferences::PrattViolation;

/// Errors raised by the library.
///
/// Failure reports that are part of an operation's normal output (for
/// example a kernel that does not decompose) are returned as values, not as
/// errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: masses that do not sum to one, unsorted knots,
    /// non-finite values and similar.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The input is well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The first risk attitude is not less risk-averse than the second.
    #[error("not less risk-averse: {0}")]
    NotLessRiskAverse(PrattViolation),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
