//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by solvers, the linear-algebra kernel and scenario I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Inputs are too close to a degenerate configuration (e.g. collinear
    /// channel vectors) for the requested closed form.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative method failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The problem instance admits no feasible solution.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A scenario or sweep-config file failed schema validation.
    #[error("invalid input: field `{field}`: {reason}")]
    Schema { field: String, reason: String },
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    pub fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
