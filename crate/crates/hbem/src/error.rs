//! Error type shared across the library.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("refinement level {level} exceeds the capacity guard (max {max})")]
    Capacity { level: u32, max: u32 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported quadrature order {0}")]
    UnsupportedOrder(usize),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("kernel evaluated at coincident points")]
    SingularEvaluation,

    #[error("assembly produced a non-finite entry for triangle pair ({test}, {trial})")]
    NonFiniteEntry { test: usize, trial: usize },

    #[error("factorization failed: matrix not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("penalty hypothesis violated: Re(beta) must be positive, got {0}")]
    PenaltyHypothesis(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
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
