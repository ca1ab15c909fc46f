use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level {level} exceeds the configured cap {cap}")]
    LevelCap { level: usize, cap: usize },
    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("point is not a vertex of V_{0}")]
    PointNotInGraph(usize),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("degenerate boundary data: {0}")]
    Degenerate(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
