//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry in {role}[{index}]")]
    NonFiniteEntry { role: &'static str, index: usize },

    #[error("spectrum must be strictly increasing")]
    NotIncreasing,

    #[error("spectrum is not simple: gap {gap:.3e} below resolution {tol:.3e}")]
    NonSimpleSpectrum { gap: f64, tol: f64 },

    #[error("eigenvalue {index} has two nearest neighbours within tie tolerance")]
    AmbiguousClosest { index: usize },

    #[error("Lanczos breakdown at step {step}: norming coefficient {coeff:.3e}")]
    Breakdown { step: usize, coeff: f64 },

    #[error("shifted matrix is not almost invertible: pivot {pivot:.3e} at column {column}")]
    NotAlmostInvertible { column: usize, pivot: f64 },

    #[error("unsigned step undefined: shifted matrix is singular")]
    SingularShift,

    #[error("shift {shift} is an eigenvalue; inverse step undefined")]
    ShiftIsEigenvalue { shift: f64 },

    #[error("matrix outside the deflation neighborhood: |b1| = {b1:.3e} > eps = {eps:.3e}")]
    NotInNeighborhood { b1: f64, eps: f64 },

    #[error("two spectral components minimize the corner distance; component undefined")]
    AmbiguousComponent,

    #[error("invalid epsilon configuration: {0}")]
    InvalidEpsilon(String),

    #[error("trace was produced by `{got}`, check requires `{expected}`")]
    StrategyMismatch { expected: &'static str, got: String },

    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    #[error("step budget exhausted with {} of {expected} eigenvalues found", partial.len())]
    MaxStepsExceeded { partial: Vec<f64>, expected: usize },

    #[error("operation requires dimension {expected}, matrix has {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
