use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    ConfigParse(String),
    #[error("unknown experiment `{0}` (see `conic-em list`)")]
    UnknownExperiment(String),
    #[error(transparent)]
    Core(#[from] conic_em_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Threads(String),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::ConfigParse(msg.into())
}
