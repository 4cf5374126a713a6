use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] occ2vec::Error),

    #[error("{0}")]
    Usage(String),

    /// An upstream artifact is absent or does not match the current inputs.
    #[error("{message}; run `{stage}` first")]
    MissingStage { stage: &'static str, message: String },

    #[error("{} already exists; pass --force to overwrite", .0.display())]
    Exists(PathBuf),

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 4,
            CliError::Exists(_) => 3,
            _ => 2,
        }
    }

    pub fn missing_stage(stage: &'static str, message: impl Into<String>) -> Self {
        CliError::MissingStage { stage, message: message.into() }
    }
}
