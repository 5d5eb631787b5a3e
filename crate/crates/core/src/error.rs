use thiserror::Error;

/// Failure classes shared by every module.
///
/// The variants partition failure causes the same way the command-line exit
/// codes do, so callers can map them without inspecting messages.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive computation would exceed its configured cap.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A quantity that must be an integer is not, within tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Two independent computations of the same object disagree.
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
