use linham_core::Error;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_CERTIFICATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },

    #[error("invalid system: {0}")]
    Shape(String),

    #[error("coefficient {location}: {source}")]
    Coefficient {
        location: String,
        #[source]
        source: Error,
    },

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: Error,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("numeric check failed: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn core(context: &str, source: Error) -> Self {
        CliError::Core { context: context.to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Json { .. }
            | CliError::Shape(_)
            | CliError::Coefficient { .. }
            | CliError::Usage(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_INTERNAL,
            CliError::Core { source, .. } => core_exit_code(source),
        }
    }
}

/// Input problems map to 2, results outside the catalog to 1 and broken
/// internal guarantees to 3.
pub fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::DivisionByZero
        | Error::PoleAt(_)
        | Error::Parse { .. }
        | Error::UnsupportedFunction(_)
        | Error::NonSquare { .. }
        | Error::OddDimension(_)
        | Error::DimensionMismatch(_)
        | Error::AsymmetricBlock(_)
        | Error::NotHamiltonian
        | Error::NotSymplectic
        | Error::UnsupportedDimension(_)
        | Error::PoleOnPath(_)
        | Error::StepCountTooSmall(_)
        | Error::InvalidInterval(..) => EXIT_INPUT,
        Error::NotAbelian
        | Error::DimensionTooLarge(_)
        | Error::EmptyAlgebra
        | Error::IrrationalEigenvalueRatio(_)
        | Error::NonSquareNormalization(_)
        | Error::UnlistedAbelianAlgebra(_)
        | Error::NoMatch(_)
        | Error::NonConstantRatio(_) => EXIT_NO_CERTIFICATE,
        Error::NotNilpotent
        | Error::UnreachableKernelDim { .. }
        | Error::VerificationFailure(_)
        | Error::LemmaViolation(_)
        | Error::DegreeCap(_)
        | Error::InvariantViolation(_) => EXIT_INTERNAL,
    }
}
