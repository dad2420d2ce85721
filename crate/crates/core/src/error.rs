use thiserror::Error;

/// Errors produced by graph construction, zeta computations and tower pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid voltage assignment at dart {dart}: {reason}")]
    InvalidVoltage { dart: usize, reason: String },

    #[error("invalid covering map: {0}")]
    InvalidCovering(#[from] crate::graph::CoveringViolation),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn graph(msg: impl Into<String>) -> Self {
        Error::InvalidGraph(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn voltage(dart: usize, reason: impl Into<String>) -> Self {
        Error::InvalidVoltage {
            dart,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
