use thiserror::Error;

/// Errors shared by all computation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index fell outside a table or policy range.
    #[error("range error: {0}")]
    Range(String),

    /// A resource limit (enumeration cap, search cap) was hit.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A numeric evaluation was requested too close to a pole.
    #[error("conditioning error: distance to nearest pole {distance:.3e}")]
    Conditioning { distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
