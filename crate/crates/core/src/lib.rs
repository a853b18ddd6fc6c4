//! Engine for contextual quantum measurement.
//!
//! A *context* is a complete measurement arrangement, modeled as an ordered
//! family of N mutually orthogonal rank-one projectors summing to the
//! identity. A *modality* is one outcome of a context: certain and repeatable
//! as long as the context is unchanged. Transition probabilities between
//! contexts follow Born's rule and form unistochastic (hence doubly
//! stochastic) matrices.
//!
//! The crate provides:
//!
//! - [`linalg`]: dense complex matrices, unitaries, rank-one projectors,
//!   Hermitian eigendecomposition, Haar-random unitary sampling, and spectral
//!   fractional powers of unitaries.
//! - [`contexts`]: contexts, modalities, extravalence classes, and their
//!   constructors (from unitaries, observables, spin directions).
//! - [`probability`]: Born probabilities, transition matrices with a
//!   unistochasticity certificate, frame functions, and the super-context
//!   exclusivity check.
//! - [`reconstruction`]: connecting unitaries between contexts, continuous
//!   permutation paths, density-matrix recovery by least squares, and the
//!   qubit counterexample where that recovery fails.
//! - [`measurement`]: a seeded stochastic simulator for sequences of
//!   contextual measurements, with goodness-of-fit statistics.
//! - [`scenarios`]: pre-built demonstrations (sequential spin measurements,
//!   Mach-Zehnder interferometer, singlet pair, CHSH).
//! - [`verification`]: the property suites driven by the CLI.

pub mod contexts;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod probability;
pub mod reconstruction;
pub mod scenarios;
pub mod tolerances;
pub mod verification;

pub use contexts::{Context, ExtravalenceClass, Modality};
pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix, HermitianObservable, RankOneProjector, UnitaryMatrix};
pub use measurement::{MeasurementRecord, RandomStream, SystemState};
pub use probability::{DensityMatrix, FrameFunction, TransitionMatrix};
pub use reconstruction::{CheckReport, GleasonFitResult, QubitFrameCounterexample};
pub use scenarios::{ScenarioReport, ScenarioSpec};
