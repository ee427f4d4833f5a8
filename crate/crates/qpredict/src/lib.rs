//! Finite-dimensional quantum mechanics as a prediction engine.
//!
//! A quantum state here is nothing more than a catalog of probabilistic
//! predictions for measurement outcomes. The crate provides:
//!
//! - [`hilbert`] — complex inner-product spaces: states, self-adjoint
//!   observables with spectral decomposition, Born-rule probabilities,
//!   unitary time evolution, and tensor composition.
//! - [`lattice`] — the orthocomplemented lattice of closed subspaces
//!   ("quantum logic"), Boolean sublattices of compatible outcomes, and a
//!   classical powerset lattice for contrast.
//! - [`prediction`] — probability as predicted relative frequency: exact
//!   binomial tables, outcome distributions, and seeded frequency sampling.
//! - [`measurement`] — projective collapse, the von Neumann mixture, the
//!   pre-measurement compound unitary, partial traces, and interference
//!   norms.
//! - [`epr`] — the Bohm spin-½ EPR experiment: singlet correlations,
//!   no-signaling marginals, post-selection bookkeeping, and CHSH.
//!
//! All values are immutable after construction; no operation mutates its
//! inputs, so everything is safe to share across threads. Sampling is
//! deterministic given a seed (see [`rng`]).

pub mod epr;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod measurement;
pub mod prediction;
pub mod random;
pub mod rng;

mod linalg;

pub use error::{Error, Result};
pub use hilbert::{ComplexMatrix, EvolutionConfig, Observable, StateVector};
pub use lattice::{ClassicalEvent, Subspace};
pub use measurement::{DensityOperator, MeasurementOutcome};
pub use prediction::{FrequencyRecord, OutcomeDistribution};

/// Tolerance for norm, self-adjointness, and projector-algebra checks.
pub const TOL_NORM: f64 = 1e-10;

/// Tolerance on computed eigenvalues relative to the true spectrum.
pub const TOL_EIG: f64 = 1e-8;

/// Eigenvalues closer than this are merged into one degenerate eigenspace.
pub const TOL_DEGEN: f64 = 1e-8;

/// Rank-decision cutoff for subspace computations (spans, kernels, meets).
pub const TOL_RANK: f64 = 1e-9;

/// Probabilities below this threshold count as impossible outcomes.
pub const TOL_ZERO: f64 = 1e-12;

/// Default cap on space dimensions; everything is dense.
pub const DEFAULT_DIM_LIMIT: usize = 64;
