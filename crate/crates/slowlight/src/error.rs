//! Error types shared across the crate.

use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Gamma function evaluated at (or within 1e-12 of) a non-positive integer.
    #[error("gamma pole at z = {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    /// Input outside the supported domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter combination for which the requested expression degenerates.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// A state norm left the admissible band during numerical integration.
    #[error("norm drift {drift:.3e} exceeds 1e-6 at (zeta={zeta}, tau={tau})")]
    NormDrift { drift: f64, zeta: f64, tau: f64 },

    /// Inconsistent run configuration (grid/boundary mismatch and similar).
    #[error("configuration error: {0}")]
    Config(String),

    /// Unknown or ill-typed key in a scenario document.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A scenario invariant does not hold.
    #[error("validation error: {0}")]
    Validation(String),

    /// Filesystem failure, annotated with the offending path.
    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
