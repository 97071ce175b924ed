use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("self-loop at vertex {0}; only simple graphs are supported")]
    SelfLoop(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("coloring has length {actual}, graph has {expected} vertices")]
    ColoringLength { expected: usize, actual: usize },

    #[error("isomorphism search refused: {vertices} vertices exceeds the limit of {limit}")]
    SizeGuard { vertices: usize, limit: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("invalid voltage assignment: {0}")]
    InvalidVoltage(String),

    #[error("invalid covering map: {0}")]
    InvalidCover(String),

    #[error("fibers have unequal sizes: vertex {vertex} has {size}, expected {expected}")]
    UnequalFibers {
        vertex: usize,
        size: usize,
        expected: usize,
    },

    #[error("covers are over different base graphs")]
    BaseMismatch,

    #[error("seed ({source_vertex}, {target_vertex}) does not respect fibers")]
    SeedFiberMismatch {
        source_vertex: usize,
        target_vertex: usize,
    },

    #[error("base graph stable coloring is not discrete")]
    NonDiscreteBase,

    #[error("enumeration needs {required} voltage tuples, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("feature dimension {actual} does not match model input dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
