use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] qlab_core::Error),
}

impl CliError {
    /// 1 for rejected input, 2 for a numerical invariant that did not hold.
    pub fn exit_code(&self) -> u8 {
        use qlab_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Core(e) => match e {
                E::Domain(_) | E::DimensionMismatch { .. } | E::Inadmissible(_) | E::GridMismatch => 1,
                _ => 2,
            },
        }
    }
}
