use num_complex::Complex64;
use thiserror::Error;

/// Errors raised anywhere in the exact pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at t = {0}")]
    PoleAt(Complex64),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unsupported function: {0}")]
    UnsupportedFunction(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("block {0} is not symmetric")]
    AsymmetricBlock(char),

    #[error("matrix is not Hamiltonian (M^t J + J M != 0)")]
    NotHamiltonian,

    #[error("matrix is not symplectic (S^t J S != J)")]
    NotSymplectic,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("nilpotent with kernel dimension {kernel_dim} in a configuration excluded for sp(4): {detail}")]
    UnreachableKernelDim { kernel_dim: usize, detail: String },

    #[error("Lie algebra is not abelian")]
    NotAbelian,

    #[error("abelian algebra of dimension {0} exceeds the catalog bound of 2")]
    DimensionTooLarge(usize),

    #[error("empty Lie algebra has no abelian class")]
    EmptyAlgebra,

    #[error("eigenvalues not representable over Q(i): {0}")]
    IrrationalEigenvalueRatio(String),

    #[error("normal form requires a square root outside Q(i): {0}")]
    NonSquareNormalization(String),

    #[error("abelian algebra outside the canonical list: {0}")]
    UnlistedAbelianAlgebra(String),

    #[error("classification is only available for n = 2, got n = {0}")]
    UnsupportedDimension(usize),

    #[error("verification failure: {0}")]
    VerificationFailure(String),

    #[error("system does not match the canonical row: {0}")]
    NoMatch(String),

    #[error("coefficient ratio is not constant: {0}")]
    NonConstantRatio(String),

    #[error("normal variational equation differs from the motion matrix: {0}")]
    LemmaViolation(String),

    #[error("extended polynomial degree {0} exceeds the cap of 3")]
    DegreeCap(usize),

    #[error("pole of the coefficient matrix on the integration path near t = {0}")]
    PoleOnPath(f64),

    #[error("step count {0} is too small")]
    StepCountTooSmall(usize),

    #[error("integration interval [{0}, {1}] is empty or not finite")]
    InvalidInterval(f64, f64),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
