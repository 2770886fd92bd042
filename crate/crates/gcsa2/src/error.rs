use thiserror::Error;

/// Errors reported by parsing, construction, and serialization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("path count cap exceeded ({cap} paths); raise the cap or reduce the order")]
    PathCapExceeded { cap: u64 },

    #[error("path graph oracle cap exceeded ({nodes} nodes > {cap})")]
    OracleCapExceeded { nodes: usize, cap: usize },

    #[error("cannot prune with prefix {prefix:?}: {reason}")]
    PruneRefused { prefix: String, reason: String },

    #[error("simplified encoding unsupported: node {node} has {count} predecessors with the same label")]
    SimplifiedUnsupported { node: usize, count: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed index data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
