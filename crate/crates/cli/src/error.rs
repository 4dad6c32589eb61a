use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad configuration, inconsistent arguments.
    #[error("usage: {0}")]
    Usage(String),
    /// Property tables missing or malformed, or queried outside their range.
    #[error("data: {0}")]
    Data(String),
    /// Inputs that parse but violate a model constraint.
    #[error("validation: {0}")]
    Validation(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 2,
            CliError::Validation(_) => 65,
            CliError::Internal(_) => 70,
        })
    }

    pub fn write(e: std::io::Error, what: &str) -> Self {
        CliError::Internal(format!("writing {what}: {e}"))
    }
}

impl From<hedrop::Error> for CliError {
    fn from(e: hedrop::Error) -> Self {
        use hedrop::Error as E;
        let msg = e.to_string();
        match e {
            E::Io { .. } | E::Parse { .. } | E::NonMonotone { .. } | E::EmptyTable | E::OutOfRange { .. } => {
                CliError::Data(msg)
            }
            E::Integration { .. } | E::NoConvergence(_) => CliError::Internal(msg),
            _ => CliError::Validation(msg),
        }
    }
}

impl<P: std::fmt::Debug> From<hedrop::IntegrationFailure<P>> for CliError {
    fn from(f: hedrop::IntegrationFailure<P>) -> Self {
        f.error.into()
    }
}

pub type CliResult<T> = Result<T, CliError>;
