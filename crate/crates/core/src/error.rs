use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("key must be {expected} bytes, got {actual}")]
    KeyLength { expected: usize, actual: usize },

    #[error("block must be {expected} bytes, got {actual}")]
    BlockLength { expected: usize, actual: usize },

    #[error("unsupported Rijndael width of {0} words (expected 4 to 8)")]
    UnsupportedWidth(usize),

    #[error("unsupported block length of {0} bits")]
    UnsupportedBlockLength(usize),

    #[error("IV must be {expected} bytes, got {actual}")]
    IvLength { expected: usize, actual: usize },

    #[error("malformed frame: {0}")]
    MalformedFrame(String),

    #[error("SNR {snr_db} dB is outside the channel table range [{min}, {max}] dB")]
    TableRange { snr_db: f64, min: f64, max: f64 },

    #[error("channel table line {line}: {reason}")]
    ChannelTable { line: usize, reason: String },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("frame {index} has zero bit error probability; clamp to a floor before optimizing")]
    DegenerateChannel { index: usize },

    #[error("{what}: {left} vs {right}")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("report row {row}: {reason}")]
    Report { row: usize, reason: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
