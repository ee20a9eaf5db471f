//! Shared error type for the whole library.

use thiserror::Error;

/// Everything that can go wrong while fitting models or evaluating measures.
#[derive(Error, Debug)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("zero scale: {0}")]
    ZeroScale(String),
    #[error("could not draw a non-degenerate direction after {0} attempts")]
    DegenerateDirections(usize),
    #[error("ray bracket failure: depth never fell below target after {0} doublings")]
    UnboundedRay(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("at grid point {index} (t = {t}): {source}")]
    AtGridPoint {
        index: usize,
        t: f64,
        source: Box<Error>,
    },
    #[error("in replication {index}: {source}")]
    AtReplication { index: usize, source: Box<Error> },
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("dataset shape mismatch: {0}")]
    DatasetShape(String),
    #[error("download failed: {0}")]
    Download(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
