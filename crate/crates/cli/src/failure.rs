use thiserror::Error;
use xxz_core::Error;

/// Run-level failure, one variant per exit code.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error("{0}; re-seed (--seed) or perturb the parameters")]
    NonGeneric(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Config(_) => 2,
            Failure::NonGeneric(_) => 3,
        }
    }

    /// Parameter validation: singular values are a genericity problem, the
    /// rest is a malformed config.
    pub fn from_validation(e: Error) -> Failure {
        match e {
            Error::Singularity(_) | Error::NonGeneric(_) | Error::GaugeSingularity { .. } => Failure::NonGeneric(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Size(_) => Failure::Config(e.to_string()),
            Error::NonGeneric(_)
            | Error::Singularity(_)
            | Error::GaugeSingularity { .. }
            | Error::DegenerateCase(_)
            | Error::Pole
            | Error::UninformativeOverlap(_) => Failure::NonGeneric(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Internal(e.to_string())
    }
}
