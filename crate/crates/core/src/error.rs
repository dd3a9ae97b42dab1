use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("node {node} is not part of {topology}")]
    InvalidNode { node: String, topology: String },

    #[error("invalid level profile: {0}")]
    InvalidProfile(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("flow matrix is singular: no usable pivot in column {column}")]
    Singular { column: usize },

    #[error("level index {index} out of range for {levels} levels")]
    LevelOutOfRange { index: usize, levels: usize },

    #[error("length mismatch: expected {expected} levels, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("metrics undefined: root fraction is {0}, must be positive")]
    UndefinedMetrics(f64),

    #[error("invalid sigma grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
