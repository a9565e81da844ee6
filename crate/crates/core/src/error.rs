use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} um is {side} the model range [{min_um}, {max_um}] um")]
    WavelengthOutOfRange {
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
        /// "below" or "above"
        side: &'static str,
    },

    #[error("unphysical refractive index n^2 = {n_squared} at {wavelength_um} um")]
    UnphysicalIndex { wavelength_um: f64, n_squared: f64 },

    #[error("invalid domain pattern: {0}")]
    InvalidPattern(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: key `{key}`: {message}")]
    ConfigLine {
        line: usize,
        key: String,
        message: String,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("batch item {index} failed: {message}")]
    BatchItem { index: usize, message: String },

    #[error("exhaustive search over {n} domains refused: 2^{n} = {patterns} patterns exceeds the 2^20 limit")]
    OracleTooLarge { n: usize, patterns: u128 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
