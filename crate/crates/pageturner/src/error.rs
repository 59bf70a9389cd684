use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("search budget of {limit} candidate assignments exceeded")]
    Budget { limit: u64 },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }

    pub fn violation(msg: impl Into<String>) -> Error {
        Error::Violation(msg.into())
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Violation(_) => 2,
            Error::Budget { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
