use thiserror::Error;

/// Errors across the codec pipeline.
///
/// Variants are grouped by how a caller should react: `InvalidParam` is a
/// usage mistake, `Format` means the input bytes cannot be understood,
/// `Integrity` means the bytes were understood but fail their own
/// consistency checks (checksums, chunk sequences).
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("integrity error: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
