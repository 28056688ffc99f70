use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed table: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing column `{0}` in header")]
    MissingColumn(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownEndpoint(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("vertex `{vertex}`, attribute `{attribute}`: `{value}` is not a nonnegative integer")]
    InvalidAttributeValue {
        vertex: String,
        attribute: String,
        value: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex `{vertex}`: invalid geometry: {message}")]
    InvalidGeometry { vertex: String, message: String },
    #[error("vertex `{0}` has no geometry")]
    MissingGeometry(String),
    #[error("vertex index {0} out of range")]
    InvalidVertex(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("interval [{k}, {l}] is empty")]
    InvalidInterval { k: f64, l: f64 },
    #[error("neighborhood #{0} does not contain the described vertex set")]
    NotCovering(usize),
    #[error("interval probability {0} is not positive")]
    NonPositiveProbability(f64),
    #[error("fit did not converge after {iterations} sweeps (max residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("model/graph mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size guard exceeded: {size} > {limit}")]
    GuardExceeded { size: usize, limit: usize },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
