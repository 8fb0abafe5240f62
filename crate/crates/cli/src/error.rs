use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidState(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<nonclass::Error> for CliError {
    fn from(e: nonclass::Error) -> Self {
        match e {
            nonclass::Error::Unsupported(msg) => CliError::Unsupported(msg),
            other => CliError::Other(other.into()),
        }
    }
}
