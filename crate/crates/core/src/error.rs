use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("n*D must be even (n = {n}, D = {degree})")]
    Parity { n: usize, degree: usize },

    #[error(
        "no simple {degree}-regular graph on {n} vertices with girth >= {min_girth} \
         found after {attempts} attempts"
    )]
    GenerationFailed {
        n: usize,
        degree: usize,
        min_girth: usize,
        attempts: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("radius {radius} exceeds the configured cap {cap}")]
    RadiusCap { radius: usize, cap: usize },

    #[error("correlation {0} is outside [-1, 1]")]
    Domain(f64),

    #[error("instance too large: {what} = {value} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("estimated work {work:.3e} exceeds budget {budget:.3e}")]
    Budget { work: f64, budget: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
