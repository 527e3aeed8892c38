//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex {vertex} (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("index out of range: neighbor {index} of vertex {vertex} with degree {degree}")]
    IndexOutOfRange {
        vertex: usize,
        index: usize,
        degree: usize,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("exceeds brute-force limit: {0}")]
    BruteForceLimit(String),

    #[error("graph must be connected")]
    Disconnected,

    #[error("graph must be simple (no self-loops or parallel edges): {0}")]
    NotSimple(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for parameter errors.
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
