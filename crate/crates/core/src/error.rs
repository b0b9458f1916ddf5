use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("chart mismatch: l = {left} versus l = {right}")]
    ChartMismatch { left: usize, right: usize },
    #[error("no value assigned to coordinate {0}")]
    MissingCoordinate(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsupported frame: {0}")]
    UnsupportedFrame(String),
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
    #[error("not a free distribution: {0}")]
    NotFreeDistribution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
