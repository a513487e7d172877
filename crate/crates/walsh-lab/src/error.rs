use thiserror::Error;

/// Errors produced by constructors and operators in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("resolution {0} exceeds the supported maximum of {max}", max = crate::point::MAX_RESOLUTION)]
    ResolutionTooLarge(u32),

    #[error("code {code} does not fit in resolution {resolution} (must be < 2^{resolution})")]
    CodeOutOfRange { code: u32, resolution: u8 },

    #[error("coordinate index {index} out of range for resolution {resolution}")]
    CoordinateOutOfRange { index: u32, resolution: u8 },

    #[error("frequency {frequency} out of range for resolution {resolution} (must be < 2^{resolution})")]
    FrequencyOutOfRange { frequency: u64, resolution: u8 },

    #[error("resolution mismatch: {0} vs {1}")]
    ResolutionMismatch(u8, u8),

    #[error("{what} = {value} out of range (must be at most {max})")]
    IndexOutOfRange {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error("value list has length {got}, expected {expected} for resolution {resolution}")]
    LengthMismatch {
        got: usize,
        expected: usize,
        resolution: u8,
    },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function spec parse error at byte {position}: {message}")]
    SpecParse { position: usize, message: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("malformed grid data: {0}")]
    MalformedData(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
