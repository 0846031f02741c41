use boostlab::momentum::MomentumError;
use boostlab::ScenarioError;
use std::io;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("writing {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for anything wrong with the request, 3 when the numerics fail.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scenario(e) => match e {
                ScenarioError::UnknownPreset { .. } | ScenarioError::InvalidConfig(_) => 2,
                ScenarioError::Momentum(MomentumError::DegenerateNorm(_)) => 3,
                ScenarioError::Momentum(_) => 2,
                ScenarioError::Kinematics(_) | ScenarioError::Channel { .. } => 3,
            },
            CliError::Io { .. } | CliError::Csv { .. } => 1,
        }
    }
}
