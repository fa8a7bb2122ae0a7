use thiserror::Error;

/// Failure classes of a run, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("resource guard: {0}")]
    Guard(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io(_) => 4,
            CliError::Numeric(_) => 1,
        }
    }
}

impl From<rqb_core::Error> for CliError {
    fn from(e: rqb_core::Error) -> Self {
        use rqb_core::Error as E;
        match e {
            E::ResourceGuard { .. } => CliError::Guard(e.to_string()),
            E::Domain(_) | E::DimensionMismatch { .. } | E::InvalidProbabilities(_) | E::TooFewSamples(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
