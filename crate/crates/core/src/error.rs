use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("point {index} ({x}, {y}) lies outside the domain [{x0}, {x1}] x [{y0}, {y1}]")]
    OutOfDomain {
        index: usize,
        x: f64,
        y: f64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("configuration mismatch: {0}")]
    Configuration(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("curve not in general position: {0}")]
    NotInGeneralPosition(String),

    #[error("inconsistent jumps: {0}")]
    InconsistentJumps(String),

    #[error("inconsistent moments: {0}")]
    InconsistentMoments(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
