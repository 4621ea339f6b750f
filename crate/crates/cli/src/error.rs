use std::io;
use std::path::PathBuf;

use thiserror::Error;
use whittaker_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: cannot parse {column} value `{value}`")]
    Parse {
        line: u64,
        column: String,
        value: String,
    },
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: u64, message: String },
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("duplicate abscissa t = {t} on lines {first} and {second}")]
    DuplicateAbscissa { t: f64, first: u64, second: u64 },
    #[error("need at least {needed} data rows, found {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("line {line}: weight {value} outside [0, 1]")]
    WeightOutOfRange { line: u64, value: f64 },
    #[error("unequally spaced abscissa (use without --strict-spacing to proceed on sample index)")]
    UnequalSpacing,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{0}")]
    Data(CoreError),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("benchmark config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Ingest(_) | CliError::Data(_) | CliError::Output { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }

    /// Classifies an error raised while computing (not while building the signal).
    pub fn compute(err: CoreError) -> Self {
        match err {
            CoreError::InvalidOrder(_)
            | CoreError::InvalidProbeCount { .. }
            | CoreError::InvalidRange(_)
            | CoreError::InvalidLambda(_)
            | CoreError::UnknownExpression(_)
            | CoreError::InvalidNoise(_) => CliError::Usage(err.to_string()),
            CoreError::TooFewObservations { .. }
            | CoreError::SignalTooShort { .. }
            | CoreError::InvalidSignal(_) => CliError::Data(err),
            _ => CliError::Numerical(err),
        }
    }
}
