use thiserror::Error;

/// Failure categories, each with its own process exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<dimer::Error> for CliError {
    fn from(e: dimer::Error) -> Self {
        use dimer::Error as E;
        match e {
            E::IndexOutOfRange { .. } | E::InvalidArgument(_) | E::DenseCapExceeded { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
