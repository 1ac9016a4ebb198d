use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("network has no edges")]
    NoEdges,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("node {node} is outside the graph (n = {node_count})")]
    NodeOutOfRange { node: u32, node_count: usize },

    #[error("seed sets overlap at node {0}")]
    OverlappingSeeds(u32),

    #[error("start delay {delay} must be smaller than horizon {horizon}")]
    DelayBeyondHorizon { delay: u32, horizon: u32 },

    #[error("strategy requires timestamped edges")]
    MissingTimestamps,

    #[error("metric not defined for this trace: {0}")]
    TraceKind(String),

    #[error("unpaired traces: {0}")]
    Unpaired(String),

    #[error("config: {0}")]
    Config(String),

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

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
