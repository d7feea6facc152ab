use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{what}: argument {value} outside domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("direction numbers, line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("direction numbers, dimension {dim}: {message}")]
    Validation { dim: usize, message: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Variance is zero (or numerically indistinguishable from zero), so the
    /// mean dimension is undefined.
    #[error("degenerate integrand: variance {sigma2:e} is not positive")]
    Degenerate { sigma2: f64 },

    #[error("{0} has no closed form")]
    NoClosedForm(&'static str),

    #[error("cannot preintegrate over coordinate {index}: its direction entry is zero")]
    InvalidPreintegration { index: usize },

    #[error("quadrature did not converge: achieved error estimate {achieved:e} > tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("inconsistent bound report: {0}")]
    InconsistentBounds(String),

    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::InvalidVector(_) | Error::DimensionMismatch { .. } => 2,
            Error::Io { .. } | Error::Csv(_) => 4,
            Error::Parse { .. } | Error::Validation { .. } => 4,
            _ => 3,
        }
    }
}
