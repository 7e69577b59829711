use thiserror::Error;

/// Errors raised by the library. Precondition failures are kept distinct from
/// input parsing so the CLI can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty degree sequence")]
    EmptySequence,
    #[error("degree {degree} at vertex {vertex} is outside 0..={max}")]
    DegreeOutOfRange { vertex: usize, degree: usize, max: usize },
    #[error("degree sequence is not graphical")]
    NotGraphical,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }
}
