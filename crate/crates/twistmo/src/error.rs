use thiserror::Error;
use twistmo_core::Error as CoreError;

pub const EXIT_CONFIG_INVALID: i32 = 2;
pub const EXIT_NUMERIC_FAILURE: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("numerical failure: {0}")]
    NumericFailure(String),
    #[error("guard tripped: {0}")]
    TooLarge(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => EXIT_CONFIG_INVALID,
            CliError::NumericFailure(_) | CliError::Io(_) => EXIT_NUMERIC_FAILURE,
            CliError::TooLarge(_) => EXIT_TOO_LARGE,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::TooLarge { .. } => CliError::TooLarge(msg),
            CoreError::InvalidArgument(_) | CoreError::BadModel(_) | CoreError::MethodDomain { .. } | CoreError::EmptyPrimeClass { .. } => {
                CliError::ConfigInvalid(msg)
            }
            CoreError::NotCoprime { .. } | CoreError::PoleAtOne | CoreError::PoleAtNonPositiveInteger(_) | CoreError::QuadratureNotConverged(_) => {
                CliError::NumericFailure(msg)
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::ConfigInvalid(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
