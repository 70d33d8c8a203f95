use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),

    #[error("invalid lattice window: {0}")]
    InvalidWindow(String),

    #[error("invalid test function: {0}")]
    InvalidFunction(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The requested lattice points are not covered by the sample window.
    #[error("window coverage violated: {0}")]
    Coverage(String),

    #[error("{what} needs {size} sites but the limit is {limit}")]
    Resource {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    /// Exact enumeration would be too large; use Monte Carlo instead.
    #[error("{what} is infeasible: size {size} exceeds cap {limit}")]
    Feasibility {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("quadrature did not converge: last {last}, previous {previous}")]
    NonConvergence { last: Complex64, previous: Complex64 },

    #[error("invalid config `{parameter}`: {message}")]
    InvalidConfig { parameter: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid-spec",
            Error::InvalidWindow(_) => "invalid-window",
            Error::InvalidFunction(_) => "invalid-function",
            Error::InvalidRegion(_) => "invalid-region",
            Error::Domain(_) => "domain",
            Error::Coverage(_) => "coverage",
            Error::Resource { .. } => "resource",
            Error::Feasibility { .. } => "feasibility",
            Error::NonConvergence { .. } => "non-convergence",
            Error::InvalidConfig { .. } => "invalid-config",
            Error::Io(_) => "io",
        }
    }

    /// The offending parameter, when one can be named.
    pub fn parameter(&self) -> Option<&str> {
        match self {
            Error::InvalidConfig { parameter, .. } => Some(parameter),
            Error::Resource { what, .. } | Error::Feasibility { what, .. } => Some(what),
            _ => None,
        }
    }
}
