use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("empty interval: lo = {lo} is not below hi = {hi}")]
    EmptyInterval { lo: String, hi: String },

    #[error("polynomial vanishes at the {side} endpoint {point}")]
    EndpointRoot { side: &'static str, point: String },

    #[error("degree {degree} exceeds the explicit-expansion ceiling {ceiling}; use the log-derivative path")]
    DegreeCeiling { degree: u128, ceiling: usize },

    #[error("polynomial of degree {degree} does not fit a spanning form with m = {m}")]
    DegreeAboveEdgeCount { degree: usize, m: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph has {edges} edges; brute-force enumeration is limited to {max}")]
    TooManyEdges { edges: usize, max: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("attach vertex {vertex} is out of range for graph {graph} with {vertex_count} vertices")]
    InvalidAttach {
        graph: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("K_{n} is above the configured maximum n = {max}")]
    CompleteTooLarge { n: usize, max: usize },

    #[error("invalid cache entry for n = {n}: {reason}")]
    CacheCorrupt { n: String, reason: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid product spec: {0}")]
    InvalidSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
