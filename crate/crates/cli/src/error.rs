use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag, config key or value.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] sedosc::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io { path: "<stdout>".into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
