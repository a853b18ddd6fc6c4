//! Numerical tolerances and limits used across the engine.

/// Structural checks in Frobenius norm: unitarity, Hermiticity,
/// projector idempotence, context completeness.
pub const TOL_UNITARY: f64 = 1e-10;

/// Modulus threshold below which a vector component is ignored when
/// choosing the phase-fixing pivot.
pub const TOL_PHASE: f64 = 1e-12;

/// Frobenius tolerance when comparing two independently computed
/// projectors (extravalence, measurement alignment). Looser than
/// [`TOL_UNITARY`] to absorb accumulated eigendecomposition error.
pub const TOL_EXTRA: f64 = 1e-9;

/// Default minimal eigenvalue gap below which an observable is treated
/// as degenerate and rejected by rank-one context construction.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Probabilities within this window outside [0, 1] are clamped; anything
/// farther out is an internal-consistency error.
pub const PROB_CLAMP_WINDOW: f64 = 1e-12;

/// Transition probability below which two modalities count as mutually
/// exclusive.
pub const EXCLUSIVE_THRESHOLD: f64 = 1e-9;

/// Transition probability above which a cross-context link counts as
/// certain (1 - 1e-9).
pub const CERTAIN_THRESHOLD: f64 = 1.0 - 1e-9;

/// Born weights below this value are treated as exact zeros when building
/// the sampling CDF.
pub const CDF_ZERO: f64 = 1e-15;

/// Dense algebra only, desk scale.
pub const MAX_DIM: usize = 64;

/// Significance level of the chi-square goodness-of-fit gate.
pub const CHI_SQUARE_SIGNIFICANCE: f64 = 0.001;
