use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge record {index}: {reason}")]
    MalformedEdge { index: usize, reason: String },

    #[error("vertex {vertex} is out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },

    #[error("cluster {cluster}: vertex {vertex} is out of range for a graph with {num_vertices} vertices")]
    ClusterVertexOutOfRange {
        cluster: u64,
        vertex: usize,
        num_vertices: usize,
    },

    #[error("min cut needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("brute-force min cut is limited to {max} vertices, got {got}")]
    TooManyVertices { got: usize, max: usize },

    /// A routine that requires a connected graph was handed a disconnected
    /// one. Inside the engine this means connected-component refinement was
    /// skipped.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
