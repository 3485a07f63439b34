use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{0}")]
    Core(#[from] coarse_core::Error),
    #[error("{0}")]
    Input(String),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input<T>(message: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(message.into()))
}
