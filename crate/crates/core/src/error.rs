//! Error taxonomy shared by the whole crate.
//!
//! `Usage` marks caller mistakes (bad lengths, out-of-range windows),
//! `Config` marks invalid parameter sets, and the numerical variants mark
//! failures detected while computing. The CLI maps `Usage`/`CsvParse` to
//! exit code 1 and everything else to exit code 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("degenerate graph: |d[{index}]| = {value:e} is at or below tolerance {tolerance:e}")]
    DegenerateGraph {
        index: usize,
        value: f64,
        tolerance: f64,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::CsvParse { .. } => 1,
            _ => 2,
        }
    }
}
