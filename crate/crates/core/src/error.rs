use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("infinite energy: duplicate points ({0} and {1})")]
    DuplicatePoints(usize, usize),

    #[error("ambiguous projection: {0}")]
    AmbiguousProjection(&'static str),

    #[error("parameter out of chart domain: {0}")]
    OutOfChartDomain(String),

    #[error("limit infinite: manifold has zero {0}-dimensional measure")]
    LimitInfinite(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parts overlap: {0}")]
    PartsOverlap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
