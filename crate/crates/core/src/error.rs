use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is empty")]
    Empty,

    #[error("e-value at index {index} is NaN")]
    NanEValue { index: usize },

    #[error("e-value at index {index} is negative: {value}")]
    NegativeEValue { index: usize, value: f64 },

    #[error("e-value at index {index} is not finite: {value}")]
    NonFiniteEValue { index: usize, value: f64 },

    #[error("p-value at index {index} is outside [0, 1]: {value}")]
    PValueOutOfRange { index: usize, value: f64 },

    #[error("U-statistic order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("{what} needs at least {need} values, got {got}")]
    TooFew {
        what: &'static str,
        need: usize,
        got: usize,
    },

    #[error("accumulator holds no values")]
    EmptyAccumulator,

    #[error("(r={r}, j={j}) is outside the lower triangle of a {k}x{k} matrix")]
    IndexOutOfRange { r: usize, j: usize, k: usize },

    #[error("{what} is limited to K <= {max}, got K = {k}")]
    TooLarge {
        what: &'static str,
        k: usize,
        max: usize,
    },

    #[error("value {value} is outside the domain of the {scale} scale")]
    OutOfScale { value: f64, scale: &'static str },

    #[error("the {scale} scale cannot render a {kind} matrix")]
    KindMismatch {
        scale: &'static str,
        kind: &'static str,
    },

    #[error("matrix dimensions differ: {a} vs {b}")]
    ShapeMismatch { a: usize, b: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors raised by a hard problem-size limit.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
