use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A result would need data beyond a truncation window or cutoff.
    #[error("precision: {0}")]
    Precision(String),
    /// Input data violates a structural axiom; the message names the witness.
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("variable mismatch: {0}")]
    Mismatch(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
