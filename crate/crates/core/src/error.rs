use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("bilinear form is not symmetric")]
    NonSymmetricForm,
    #[error("bracket is not anticommutative at {0}")]
    NotAnticommutative(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
