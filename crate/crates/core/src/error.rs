use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the physical or tabulated domain (e.g. wavelength
    /// outside a dispersion set's validity band).
    #[error("domain error: {0}")]
    Domain(String),

    /// A call-level precondition was violated (e.g. energy conservation).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical routine failed to reach its target accuracy. Carries the
    /// best available estimate and the achieved error bound.
    #[error("numerical failure: {message} (estimate {estimate:e}, error bound {bound:e})")]
    Numerical {
        message: String,
        estimate: f64,
        bound: f64,
    },

    /// Malformed input data (CSV/JSON).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
