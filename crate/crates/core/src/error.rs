use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unknown state kind `{0}`")]
    UnknownState(String),

    #[error("singular entropy parameters: {0}")]
    SingularParameters(String),

    #[error("{value} does not fit in {bits} bits")]
    Overflow { value: u64, bits: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("(q, s) = ({q}, {s}) lies outside the {mode} region")]
    Region { mode: &'static str, q: f64, s: f64 },

    #[error("pairwise measurement error: {0}")]
    Measurement(String),

    #[error("mismatched reports: {0}")]
    Mismatch(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

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
