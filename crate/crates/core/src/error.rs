use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("inversion error: {0}")]
    Inversion(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Raised when an identity that holds by construction is observed to
    /// fail. Always an implementation bug.
    #[error("internal consistency fault: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
