use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Shapes of the operands are incompatible.
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    /// Entry count does not equal `rows * cols`.
    BadEntryCount { rows: usize, cols: usize, len: usize },
    NonFinite,
    NotSquare { rows: usize, cols: usize },
    /// Smallest LU pivot fell below the singularity threshold.
    SingularMatrix,
    NotHermitian { defect: f64 },
    NotPositiveDefinite { min_eigenvalue: f64 },
    InvalidWeights(String),
    RankNotOne { rank: usize },
    NotUnitModulus { index: usize, modulus: f64 },
    NotInCommutant { off_block: f64 },
    MissingWeights,
    BadWitness(String),
    CovarianceViolation { row: usize, col: usize },
    InvalidQuiver(String),
    QuiverMismatch,
    NotTripotent,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::BadEntryCount { rows, cols, len } => {
                write!(f, "{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)
            }
            Error::NonFinite => write!(f, "matrix has a NaN or infinite entry"),
            Error::NotSquare { rows, cols } => write!(f, "expected a square matrix, got {rows}x{cols}"),
            Error::SingularMatrix => write!(f, "matrix is singular within tolerance"),
            Error::NotHermitian { defect } => write!(f, "matrix is not hermitian (|k - k†| = {defect:e})"),
            Error::NotPositiveDefinite { min_eigenvalue } => {
                write!(f, "matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")
            }
            Error::InvalidWeights(msg) => write!(f, "invalid weight data: {msg}"),
            Error::RankNotOne { rank } => write!(f, "operation needs torus rank 1, got rank {rank}"),
            Error::NotUnitModulus { index, modulus } => {
                write!(f, "tau[{index}] has modulus {modulus}, expected 1")
            }
            Error::NotInCommutant { off_block } => {
                write!(f, "matrix is not block-diagonal for the weight blocks (off-block norm {off_block:e})")
            }
            Error::MissingWeights => write!(f, "frame tuple carries no weight data"),
            Error::BadWitness(msg) => write!(f, "bad stabilizer witness: {msg}"),
            Error::CovarianceViolation { row, col } => {
                write!(f, "connection data has a forbidden entry at ({row}, {col})")
            }
            Error::InvalidQuiver(msg) => write!(f, "invalid quiver: {msg}"),
            Error::QuiverMismatch => write!(f, "representations live on different double quivers"),
            Error::NotTripotent => write!(f, "argument is not a tripotent"),
        }
    }
}
impl core::error::Error for Error {}
