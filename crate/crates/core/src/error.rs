use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the analytic models, the simulators and the
/// experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Offered load reaches or exceeds capacity.
    #[error("unstable system: utilization {rho:.6} >= 1")]
    Unstable { rho: f64 },

    /// The polling formulas have no meaningful solution (non-positive
    /// denominators, probabilities above one).
    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("replication {index} failed: {source}")]
    Replication {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    /// Process exit status for the command-line tool: 3 unstable,
    /// 4 non-convergence, 2 everything else.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Unstable { .. } => 3,
            Error::NonConvergence { .. } => 4,
            _ => 2,
        }
    }

    /// Innermost error, looking through replication wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Replication { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
