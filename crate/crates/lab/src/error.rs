use thiserror::Error;

/// How a run failed, and the process exit status that goes with it.
#[derive(Debug, Error)]
pub enum RunError {
    /// Bad or inadmissible input: exit status 2.
    #[error("{0}")]
    Precondition(String),
    /// Anything else, including failed self-checks: exit status 1.
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl RunError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Self::Precondition(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Precondition(_) => 2,
            Self::Internal(_) => 1,
        }
    }
}

impl From<jumpspace::Error> for RunError {
    fn from(e: jumpspace::Error) -> Self {
        Self::Precondition(e.to_string())
    }
}

impl From<jumpspace::ParseError> for RunError {
    fn from(e: jumpspace::ParseError) -> Self {
        Self::Precondition(e.to_string())
    }
}

pub type RunResult<T> = Result<T, RunError>;
