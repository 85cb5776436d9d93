use thiserror::Error;

/// Errors produced by map construction, detection and the file codecs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("map smaller than 2x2 ({0}x{1})")]
    MapTooSmall(usize, usize),

    #[error("non-finite disparity at ({x}, {y})")]
    NonFinite { x: usize, y: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("no scan needed (scan length 0)")]
    NoScanNeeded,

    #[error("bad magic: expected \"Pf\", found {0:?}")]
    BadMagic(String),

    #[error("expected single-channel \"Pf\" file, found color \"PF\"")]
    ExpectedSingleChannel,

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("non-binary mask value {0} (pass a threshold to binarize)")]
    NonBinaryMask(u8),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
