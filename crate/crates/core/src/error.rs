use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}:{line}: cannot parse `{content}`")]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("eigen-iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("arrangement of {got} nodes does not match graph of {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("inconsistent epidemic state: {0}")]
    InconsistentState(String),

    #[error("cached rate {cached} disagrees with recount {recount} at event {event}")]
    RateMismatch {
        cached: f64,
        recount: f64,
        event: u64,
    },

    #[error("threshold search exceeded cap e={cap} without meeting the success criterion")]
    ThresholdCapExceeded { cap: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
