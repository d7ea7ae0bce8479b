use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("eigenvalue iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("Kraus operators are not trace preserving (defect {defect:.3e})")]
    Incomplete { defect: f64 },

    #[error("empty operator list")]
    EmptyChannel,

    #[error("syndrome vectors {first} and {second} are not orthogonal (overlap {overlap:.3e})")]
    NonOrthogonalSyndromes {
        first: String,
        second: String,
        overlap: f64,
    },

    #[error("vector {0} has zero norm")]
    ZeroVector(String),

    #[error("Choi matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not in X form (off-X entry magnitude {magnitude:.3e})")]
    NotXState { magnitude: f64 },

    #[error("metric points are at different probabilities ({0} vs {1})")]
    MismatchedProbability(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown figure id {0} (expected 1..=8)")]
    UnknownFigure(u32),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidProbability(_)
            | Error::InvalidArgument(_)
            | Error::UnknownFigure(_)
            | Error::MismatchedProbability(..) => 2,
            Error::Io { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
