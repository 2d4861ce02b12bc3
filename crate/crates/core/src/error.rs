use thiserror::Error;

use crate::graph::VertexLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid vertex label {0:?}")]
    InvalidLabel(String),

    #[error("vertex {0} does not exist")]
    MissingVertex(VertexLabel),

    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexLabel),

    #[error("self-loop at {0}")]
    SelfLoop(VertexLabel),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexLabel, VertexLabel),

    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(VertexLabel, VertexLabel),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph has no vertex of context-degree at least 3")]
    NoBranchVertex,

    #[error("not a subgraph of the context graph")]
    NotSubgraph,

    #[error("{what} has {actual} elements, limit is {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
