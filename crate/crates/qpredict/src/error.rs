//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by constructors and operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two values that must live in the same space have different dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A dimension outside the supported range was requested.
    #[error("invalid dimension {dim}: must be between 1 and {limit}")]
    InvalidDimension { dim: usize, limit: usize },

    /// A matrix that must be self-adjoint is not, within tolerance.
    #[error("matrix is not self-adjoint: max |M - M†| entry = {max_asymmetry:.3e}")]
    NotSelfAdjoint { max_asymmetry: f64 },

    /// A matrix passed as an orthogonal projector fails P² = P or P = P†.
    #[error("matrix is not an orthogonal projector: max residual = {residual:.3e}")]
    NotAProjector { residual: f64 },

    /// A vector that must have unit norm does not.
    #[error("vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    /// A density operator candidate violates positivity or trace conditions.
    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },

    /// Conditioning on an outcome whose probability is (numerically) zero.
    #[error("impossible outcome: probability {probability:.3e} is below threshold")]
    ImpossibleOutcome { probability: f64 },

    /// The apparatus space cannot register every eigenspace of the observable.
    #[error("apparatus too small: {needed} pointer states needed, dimension is {got}")]
    ApparatusTooSmall { needed: usize, got: usize },

    /// A compound dimension does not factor as declared.
    #[error("dimension {dim} does not factor as {dim_left} x {dim_right}")]
    NonFactorizableDims {
        dim: usize,
        dim_left: usize,
        dim_right: usize,
    },

    /// A probability distribution violates its normalization or ordering rules.
    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    /// Generic argument violation (out-of-range angle, empty setting list, ...).
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    /// Eigenspace count exceeds the Boolean-sublattice size guard.
    #[error("too many eigenspaces for Boolean expansion: {count} > {limit}")]
    TooManyEigenspaces { count: usize, limit: usize },

    /// A post-selection filter matched no trials.
    #[error("empty selection: no trials match the requested setting and outcome")]
    EmptySelection,

    /// A computed value violated an internal invariant (self-check failure).
    #[error("numerical invariant violated: {reason}")]
    InvariantViolation { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
