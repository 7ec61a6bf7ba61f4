use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    /// A check or precondition on valid input failed.
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] arborflow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use arborflow::Error as E;
        match self {
            CliError::Failed(_) => 1,
            CliError::Core(E::NotUnital(_) | E::NotFull(_) | E::Network(_) | E::Evaluation(_)) => 1,
            _ => 2,
        }
    }
}
