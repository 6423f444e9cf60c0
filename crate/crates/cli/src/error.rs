use std::path::PathBuf;

use onepath_core::OppError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] OppError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error("unknown preset `{0}` (expected ceramic or fdm)")]
    UnknownPreset(String),
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("unsupported model `{0}` (expected .profile, .stl, .obj or fixture:<name>)")]
    Format(String),
    #[error("model is {found} but --mode {requested} was given")]
    Mode { found: &'static str, requested: &'static str },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
