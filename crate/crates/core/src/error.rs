use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not orthogonal: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthogonal { defect: f64, tol: f64 },

    #[error("matrix is not symmetric: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("eigenvalue pairing failed: pair {index} differs by {gap:.3e} (tolerance {tol:.3e})")]
    PairingFailure { index: usize, gap: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate spectrum: cosines {i} and {j} coincide within {tol:.1e}")]
    DegenerateSpectrum { i: usize, j: usize, tol: f64 },

    #[error("degenerate angles: Weyl denominator vanishes")]
    DegenerateAngles,

    #[error("sample is empty")]
    EmptySample,

    #[error("sample mixes determinant signs")]
    MixedDeterminants,

    #[error("element has determinant -1; statistic requires the special orthogonal group")]
    DeterminantMinusOne,

    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate input: all values are identical")]
    DegenerateInput,

    #[error("singular matrix")]
    Singular,

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by the environment rather than by the numbers.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
