use thiserror::Error;

/// Errors surfaced by the engine.
///
/// `Input` covers malformed arguments and files, `Budget` an explicit refusal
/// to run a computation that exceeds its configured size limit, and
/// `Internal` a violated invariant of the implementation itself.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line front end: 2 for bad input,
    /// 3 for a budget refusal, 1 for a violated internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Budget(_) => 3,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(format!($($arg)*)) };
}

macro_rules! internal_err {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}

pub(crate) use input_err;
pub(crate) use internal_err;
