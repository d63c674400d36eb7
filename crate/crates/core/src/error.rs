use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("contract error: {0}")]
    Contract(String),

    #[error("alternation error: {0}")]
    Alternation(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("instance error: {0}")]
    Instance(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("decomposition error: {0}")]
    Decomposition(String),

    #[error("parse error at line {line}, column {column}: {message}{}", expected_suffix(.expected))]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },

    #[error("eval error: {0}")]
    Eval(String),

    #[error("format error: {0}")]
    Format(String),
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
