//! Error type shared across the engine.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid dimension {0} (must be between 1 and {max})", max = crate::tolerances::MAX_DIM)]
    InvalidDimension(usize),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("entries must be finite")]
    NonFiniteEntry,

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("observable has a degenerate spectrum (smallest gap {gap:.3e} < {required:.3e}); rank-one association impossible")]
    DegenerateObservable { gap: f64, required: f64 },

    #[error("invalid spin {0}: 2j must be a non-negative integer and 2j+1 <= {max}", max = crate::tolerances::MAX_DIM)]
    InvalidSpin(f64),

    #[error("expected {expected} labels, got {found}")]
    LabelCountMismatch { expected: usize, found: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("probability {0} outside [0, 1] beyond the rounding window; internal inconsistency")]
    ProbabilityOutOfRange(f64),

    #[error("unitary does not map the initial context onto the final one (max projector error {0:.3e})")]
    MappingMismatch(f64),

    #[error("rank-deficient sample set: {0}")]
    RankDeficient(String),

    #[error("internal consistency check failed: {0}")]
    Certification(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no records matched the selection: {0}")]
    EmptySelection(String),

    #[error("vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("unknown scenario '{name}'; available: {available}")]
    UnknownScenario { name: String, available: String },

    #[error("scenario '{scenario}' is missing parameter '{name}'")]
    MissingParameter { scenario: String, name: String },
}

impl Error {
    /// True for errors caused by bad user input rather than a failed
    /// physics or consistency check. The CLI maps these to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownScenario { .. }
                | Error::MissingParameter { .. }
                | Error::InvalidParameter(_)
                | Error::InvalidSpin(_)
                | Error::LabelCountMismatch { .. }
                | Error::InvalidDimension(_)
        )
    }
}
