use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two inputs disagree on a length or domain size.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A symbol or index falls outside its allowed range.
    #[error("out of range: {0}")]
    Range(String),

    /// A precondition on a numeric parameter is violated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Quadrature did not reach the requested tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:.6e}, error {error_estimate:.3e} > tolerance {tolerance:.3e} after {intervals} intervals"
    )]
    Numeric {
        estimate: f64,
        error_estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("insufficient samples in {which}: need {required} (2n with n = {n}), found {found}")]
    InsufficientSamples {
        which: String,
        required: usize,
        n: usize,
        found: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
