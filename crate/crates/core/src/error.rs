//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// A numerical routine could not reach the requested accuracy.
    #[error("{context}: requested accuracy {requested:.3e}, achieved {achieved:.3e}")]
    Accuracy {
        context: &'static str,
        requested: f64,
        achieved: f64,
    },

    /// A domain precondition was violated (unphysical state, bad argument).
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough data points for a fit or detector.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A requested ring size exceeds the configured diagonalization budget.
    #[error("ring size {n} exceeds the configured budget (max {max})")]
    MemoryBudget { n: usize, max: usize },

    /// The iterative eigensolver failed to converge.
    #[error("eigensolver did not converge: {0}")]
    Eigensolver(String),

    /// The sweep grid does not cover a transition adequately.
    #[error("insufficient grid coverage: {0}")]
    GridCoverage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
