use thiserror::Error;

use crate::hypergraph::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("hypergraph validation failed: {0:?}")]
    Validation(Vec<Violation>),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("power iteration did not converge after {iterations} iterations (rho in [{lower}, {upper}])")]
    NotConverged {
        lower: f64,
        upper: f64,
        iterations: u64,
    },

    #[error("hypergraph is not connected")]
    Disconnected,

    #[error("hypergraph has an incidence cycle; tree propagation does not apply")]
    CyclicInput,

    #[error("root not bracketed: {0}")]
    NotBracketed(String),

    #[error("dimension mismatch: expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("certificate does not cover incidence (vertex {vertex}, edge {edge})")]
    CoverageGap { vertex: usize, edge: usize },

    #[error("edge {0} is not a 2-bridge")]
    NotTwoBridge(usize),

    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
