use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    InvalidNode { node: usize, n: usize },

    #[error("self-loop on node {node} is not allowed")]
    InvalidEdge { node: usize },

    #[error("operation requires at least one unmasked node")]
    EmptyGraph,

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("attack intensity {q} out of range for graph with {n} nodes")]
    InvalidQ { q: usize, n: usize },

    #[error("no mutation possible: every attack node is reserved or no node is present")]
    NoMutationPossible,

    #[error("invalid attack curve: {0}")]
    InvalidCurve(String),

    #[error("{combinations} combinations exceed the enumeration cap {cap}")]
    TooLarge { combinations: u128, cap: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("strategy {strategy} repeat {repeat}: {source}")]
    Run {
        strategy: &'static str,
        repeat: u32,
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
