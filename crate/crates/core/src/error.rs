use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("generator index ({row},{col}) out of range for n = {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("algebra mismatch: {0}")]
    Mismatch(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),

    #[error("corrupt cache record at line {line}: {message}")]
    CorruptCache { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("fixture construction failed: {0}")]
    Fixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
