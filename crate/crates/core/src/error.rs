use std::path::PathBuf;

/// Errors raised by the library. Variants carry enough context to name the
/// offending quantity; the CLI maps them onto exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("level {level} outside hierarchy range [{min}, {max}]")]
    LevelOutOfRange { level: i32, min: i32, max: i32 },

    #[error("ball of radius {radius} does not fit in the torus of length {box_length}")]
    BallOverflow { radius: f64, box_length: f64 },

    #[error("ball of radius {radius} contains no neighbours at spacing {spacing}")]
    EmptyBall { radius: f64, spacing: f64 },

    #[error("parameter `{name}` = {value} violates {bound}")]
    Parameter {
        name: &'static str,
        value: f64,
        bound: String,
    },

    #[error("input has mean {mean:e}; the Riesz potential needs mean-zero data")]
    NonZeroMean { mean: f64 },

    #[error("field is not unit-constrained: sample {site} has norm {norm}")]
    NotUnit { site: usize, norm: f64 },

    #[error("sample {site} has norm {norm:e}, too small to project onto the sphere")]
    NearZero { site: usize, norm: f64 },

    #[error("invalid antisymmetric sign matrix: {0}")]
    InvalidOmega(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("digest mismatch: header says {expected}, data hashes to {actual}")]
    Digest { expected: String, actual: String },

    #[error("truncated sample block: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("malformed field file: {0}")]
    Structure(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, bound: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            value,
            bound: bound.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
