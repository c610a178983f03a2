//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge list parse error at line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },

    #[error("stp parse error in section {section}: {msg}")]
    StpParse { section: String, msg: String },

    #[error("query set is empty")]
    EmptyQuery,

    #[error("query vertices span more than one connected component")]
    QueryDisconnected,

    #[error("terminals span more than one connected component")]
    TerminalsDisconnected,

    #[error("vertex set induces a disconnected subgraph")]
    DisconnectedInduced,

    #[error("vertex {vertex} unreachable from root {root}")]
    Unreachable { vertex: usize, root: usize },

    #[error("instance too large: {what} = {actual} exceeds limit {limit}")]
    InstanceTooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("workload generation failed: {0}")]
    WorkloadGeneration(String),

    #[error("lp parse error at line {line}: {msg}")]
    LpParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
