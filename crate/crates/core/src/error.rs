use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle through `{0}`")]
    CycleDetected(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("{0} elements requested, at most 64 fit a mask")]
    TooLarge(usize),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("operands live over different posets")]
    PosetMismatch,
    #[error("not isotone: {0}")]
    NotIsotone(String),
    #[error("not a down-set: {0}")]
    NotDownset(String),
    #[error("not a cut: {0}")]
    NotAPartition(String),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("malformed generators: {0}")]
    MalformedGenerators(String),
    #[error("a seed is required: {0}")]
    SeedRequired(String),
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}
