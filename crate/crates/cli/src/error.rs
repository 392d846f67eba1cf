use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Demo(String),
}

impl CliError {
    /// 2 for usage and configuration mistakes, 3 for output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Demo(_) => 2,
            CliError::Write { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
