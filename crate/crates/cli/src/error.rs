use thiserror::Error;

/// Failure classes with distinct exit statuses.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<braggsim_core::Error> for CliError {
    fn from(e: braggsim_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}
