use pcroc::data::DataError;
use pcroc::fit::FitError;
use pcroc::inference::InferenceError;
use pcroc::metricsim::SimError;
use pcroc::roc::RocError;
use thiserror::Error;

use crate::parity::ParityError;

/// Failures grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RocError> for CliError {
    fn from(e: RocError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<ParityError> for CliError {
    fn from(e: ParityError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::DegenerateClasses { .. } | InferenceError::ZeroMean { .. } => {
                CliError::Degenerate(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(inner) => inner.into(),
            SimError::Exhausted { .. } => CliError::Degenerate(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub(crate) fn fit_error(e: FitError, teams: &[String]) -> CliError {
    match e {
        FitError::Disconnected(w) => CliError::Degenerate(format!(
            "strengths are not estimable: the win graph is not strongly connected ({})",
            w.describe(teams)
        )),
        other => CliError::Degenerate(other.to_string()),
    }
}
