use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unparseable symbol, inner function, config file or flag value.
    #[error("{0}")]
    Input(String),
    /// The inputs parsed but the matrix or study could not be produced.
    #[error("{0}")]
    Assembly(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Assembly(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<hardyops::Error> for CliError {
    fn from(e: hardyops::Error) -> Self {
        CliError::Assembly(e.to_string())
    }
}
