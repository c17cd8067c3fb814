use betheprep_core::{BetheError, BuildError, ResourceError, SimError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    NoSolution(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Other(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::NoSolution(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<BetheError> for CliError {
    fn from(e: BetheError) -> Self {
        match e {
            BetheError::InvalidParams(_) | BetheError::InvalidQuantumNumbers(_) => CliError::Invalid(e.to_string()),
            BetheError::NotConverged(_)
            | BetheError::DegenerateMomenta(..)
            | BetheError::SingularPair { .. }
            | BetheError::VanishingState => CliError::NoSolution(e.to_string()),
            BetheError::TooManyDownSpins(_) => CliError::Cap(e.to_string()),
            _ => CliError::Other(e.into()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Bethe(b) => b.into(),
            BuildError::NoRounds => CliError::Invalid(e.to_string()),
            BuildError::Circuit(c) => CliError::Other(c.into()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            SimError::Bethe(b) => b.into(),
            _ => CliError::Other(e.into()),
        }
    }
}

impl From<ResourceError> for CliError {
    fn from(e: ResourceError) -> Self {
        match e {
            ResourceError::BadEpsilon(_) | ResourceError::BadProbability(_) | ResourceError::InvalidSize(_) => {
                CliError::Invalid(e.to_string())
            }
            ResourceError::FactorialGuard(_) | ResourceError::Overflow { .. } => CliError::Cap(e.to_string()),
        }
    }
}
