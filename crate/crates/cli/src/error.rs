use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: String,
        value: f64,
        reason: String,
    },
    #[error(transparent)]
    Core(sphereperc_core::Error),
    #[error("{count} grid point(s) infeasible: {detail}")]
    Infeasible { count: usize, detail: String },
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl From<sphereperc_core::Error> for CliError {
    fn from(e: sphereperc_core::Error) -> Self {
        match e {
            sphereperc_core::Error::Domain {
                param,
                value,
                reason,
            } => CliError::Domain {
                param: param.to_string(),
                value,
                reason,
            },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn domain(param: &str, value: f64, reason: impl Into<String>) -> Self {
        CliError::Domain {
            param: param.to_string(),
            value,
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Domain { .. } | CliError::Core(_) => 2,
            CliError::Infeasible { .. } => 3,
            CliError::Io(_) => 1,
        })
    }
}
