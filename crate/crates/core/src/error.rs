use thiserror::Error;

/// Errors raised by the numerical kernels and the front-end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The quantity diverges; raised when the upper bound is too close to one.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative expansion failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A root finder could not bracket a sign change.
    #[error("no sign change bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// The risk-difference bound has a nonpositive log argument at `p`.
    #[error("bound undefined at p = {p}")]
    UndefinedBound { p: f64 },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures that come from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_) | Error::NoConvergence(_) | Error::NoBracket { .. } | Error::UndefinedBound { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
