use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("malformed landmark subset: {0}")]
    MalformedSubset(String),

    #[error("degenerate triangle ({0}, {1}, {2}): vertices are collinear")]
    DegenerateTriangle(usize, usize, usize),

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("duplicate points {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),

    #[error("empty neighbourhood: softmax mask has no active entry")]
    EmptyNeighborhood,

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("stale forward cache: parameters changed since the forward pass")]
    StaleCache,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("dataset integrity error: {0}")]
    Integrity(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by user input (configuration, data files) rather than a
    /// failure while running.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Parse { .. }
                | Error::Integrity(_)
                | Error::MalformedSubset(_)
                | Error::Checkpoint(_)
        )
    }
}
