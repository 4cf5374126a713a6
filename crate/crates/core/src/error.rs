use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },

    #[error("{file}: occupation {soc_code} references unknown element `{element_id}`")]
    UnknownElement {
        file: String,
        soc_code: String,
        element_id: String,
    },

    #[error("value {value} for element `{element_id}` outside scale {scale_id} range [{minimum}, {maximum}]")]
    OutOfRange {
        element_id: String,
        scale_id: String,
        value: f64,
        minimum: f64,
        maximum: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Constant series, zero variance, singular designs and similar.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("no embedding vector for `{0}`")]
    MissingVector(String),

    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },

    #[error("corrupt file {} at byte offset {offset}: {message}", path.display())]
    Corrupt {
        path: PathBuf,
        offset: u64,
        message: String,
    },

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn malformed(file: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }

    /// True for input-shape problems (as opposed to numerical failures).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Degenerate(_) | Error::NonConvergence(_))
    }
}
