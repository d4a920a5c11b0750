use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid perceptual state: {0}")]
    InvalidState(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid fixation config: {0}")]
    InvalidConfig(String),

    #[error("time {t} outside schedule of length {total}")]
    OutOfRange { t: f64, total: f64 },

    #[error("invalid fixation schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid batch design: {0}")]
    InvalidDesign(String),

    #[error("empty cell: {0}")]
    EmptyCell(String),

    #[error("regressor has zero variance")]
    DegenerateX,

    #[error("sample has zero variance")]
    ZeroVariance,

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("schema error at row {row}: {message}")]
    Schema { row: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn schema(row: usize, message: impl Into<String>) -> Self {
        Error::Schema {
            row,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
