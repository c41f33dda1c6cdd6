use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {0} outside the supported range 1..=16")]
    Dimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid vertex notation {0:?}")]
    VertexNotation(String),

    #[error("vertex {vertex} has coordinates outside 1..={n}")]
    VertexOutOfRange { vertex: String, n: usize },

    #[error("invalid weight vector: {0}")]
    WeightVector(String),

    #[error("invalid sorted vector {entries:?}: {reason}")]
    SortedVector { entries: Vec<u32>, reason: String },

    #[error("invalid symmetry: {0}")]
    Symmetry(String),

    #[error("level {level} of {weights} is empty")]
    EmptyLevel { weights: String, level: i64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("invalid seed: {0}")]
    Seed(String),

    #[error("arithmetic overflow in exact elimination")]
    Overflow,

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),

    #[error("content hash mismatch: recorded {recorded}, computed {computed}")]
    HashMismatch { recorded: String, computed: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
