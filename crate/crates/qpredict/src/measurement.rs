//! The twofold dynamics: projective collapse on one hand, unitary
//! pre-measurement entanglement on the other, and the von Neumann mixture
//! that reconciles the two descriptions.
//!
//! The central fact, checked by the test suite: tracing the apparatus out
//! of the pure compound state produced by [`premeasurement`] gives exactly
//! the statistical mixture produced by [`von_neumann_mixture`]. The two
//! descriptions agree on every system-local prediction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, ComplexMatrix, Observable, StateVector};
use crate::linalg::{CMat, CVec};
use crate::prediction::state_distribution;
use crate::rng::Sampler;
use crate::{TOL_NORM, TOL_ZERO};

/// Positive semidefinite, trace-1 operator: a pure or mixed state.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates self-adjointness (1e-10), positivity (eigenvalues
    /// ≥ -1e-10), and unit trace (1e-10).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let asym = matrix.hermiticity_residual();
        if asym > TOL_NORM {
            return Err(Error::InvalidDensity {
                reason: format!("not self-adjoint, max asymmetry {asym:.3e}"),
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TOL_NORM || trace.im.abs() > TOL_NORM {
            return Err(Error::InvalidDensity {
                reason: format!("trace is {trace}, not 1"),
            });
        }
        let h = (matrix.as_matrix() + matrix.as_matrix().adjoint()) * Complex64::from(0.5);
        let min_eig = h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -TOL_NORM {
            return Err(Error::InvalidDensity {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { matrix })
    }

    /// The rank-1 density `|ξ⟩⟨ξ|` of a pure state.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = state.as_vector();
        Self {
            matrix: ComplexMatrix::from_raw(v * v.adjoint()),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Born rule for mixed states: `tr(ρP)`.
    pub fn probability(&self, eigenprojector: &ComplexMatrix) -> Result<f64> {
        if self.dim() != eigenprojector.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: eigenprojector.dim(),
            });
        }
        let residual = eigenprojector.projector_residual();
        if residual > crate::hilbert::PROJECTOR_RESIDUAL_TOL {
            return Err(Error::NotAProjector { residual });
        }
        let p = (self.matrix.as_matrix() * eigenprojector.as_matrix()).trace().re;
        if !(-TOL_NORM..=1.0 + TOL_NORM).contains(&p) {
            return Err(Error::InvariantViolation {
                reason: format!("density probability {p} outside [0, 1]"),
            });
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Expectation value `tr(ρX)`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if self.dim() != obs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: obs.dim(),
            });
        }
        Ok((self.matrix.as_matrix() * obs.matrix().as_matrix()).trace().re)
    }
}

/// Result of one single measurement: the eigenvalue found, how likely it
/// was, and the state the system is left in.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub eigenvalue: f64,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Projective collapse: `ξ ↦ P·ξ / ‖P·ξ‖`. Conditioning on an outcome of
/// (numerically) zero probability is an error, not a state.
pub fn collapse(state: &StateVector, projector: &ComplexMatrix) -> Result<StateVector> {
    let p = born_probability(state, projector)?;
    if p <= TOL_ZERO {
        return Err(Error::ImpossibleOutcome { probability: p });
    }
    let projected = projector.as_matrix() * state.as_vector();
    StateVector::normalized(projected.as_slice().to_vec())
}

/// The von Neumann mixture `U' = Σ_k (P_k ξ)(P_k ξ)†`: the weighted blend of
/// all possible post-measurement states, before the result is known. For a
/// nondegenerate spectrum this is exactly `Σ_n |(φ, φ_n)|²·P_[φ_n]`;
/// degenerate eigenvalues keep the state's purity inside each eigenspace
/// (Lüders projection).
pub fn von_neumann_mixture(state: &StateVector, obs: &Observable) -> Result<DensityOperator> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            got: state.dim(),
        });
    }
    let dim = state.dim();
    let mut mix = CMat::zeros(dim, dim);
    for line in obs.spectrum() {
        let branch: CVec = line.projector.as_matrix() * state.as_vector();
        mix += &branch * branch.adjoint();
    }
    DensityOperator::new(ComplexMatrix::from_raw(mix))
}

/// The measurement interaction as Schrödinger dynamics: system and
/// apparatus become one compound object in the entangled state
/// `Σ_k (P_k ξ) ⊗ a_k`, where the pointer states `a_k` are the first
/// canonical basis states of the apparatus space, one per eigenspace in
/// ascending eigenvalue order. The map preserves inner products on its
/// domain, so it extends to a unitary.
pub fn premeasurement(
    system: &StateVector,
    obs: &Observable,
    apparatus_ready: &StateVector,
) -> Result<StateVector> {
    if system.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            got: system.dim(),
        });
    }
    let readings = obs.spectrum().len();
    let apparatus_dim = apparatus_ready.dim();
    if apparatus_dim < readings {
        return Err(Error::ApparatusTooSmall {
            needed: readings,
            got: apparatus_dim,
        });
    }
    ensure_basis_state(apparatus_ready)?;

    let mut out = CVec::zeros(system.dim() * apparatus_dim);
    for (k, line) in obs.spectrum().iter().enumerate() {
        let branch: CVec = line.projector.as_matrix() * system.as_vector();
        // branch ⊗ a_k lands on the columns with apparatus index k.
        for i in 0..system.dim() {
            out[i * apparatus_dim + k] += branch[i];
        }
    }
    StateVector::new(out.as_slice().to_vec())
}

fn ensure_basis_state(state: &StateVector) -> Result<()> {
    let mut ones = 0;
    for k in 0..state.dim() {
        let a = state.amplitude(k).norm();
        if (a - 1.0).abs() <= TOL_NORM {
            ones += 1;
        } else if a > TOL_NORM {
            return Err(Error::InvalidArgument {
                reason: "apparatus ready state must be a canonical basis state".into(),
            });
        }
    }
    if ones != 1 {
        return Err(Error::InvalidArgument {
            reason: "apparatus ready state must be a canonical basis state".into(),
        });
    }
    Ok(())
}

/// Which tensor factor [`partial_trace`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Left,
    Right,
}

/// Partial trace of a density operator on a `dim_left · dim_right` space,
/// keeping the requested factor.
pub fn partial_trace(
    rho: &DensityOperator,
    dim_left: usize,
    dim_right: usize,
    keep: Factor,
) -> Result<DensityOperator> {
    if dim_left * dim_right != rho.dim() {
        return Err(Error::NonFactorizableDims {
            dim: rho.dim(),
            dim_left,
            dim_right,
        });
    }
    let m = rho.matrix().as_matrix();
    let reduced = match keep {
        Factor::Left => CMat::from_fn(dim_left, dim_left, |i, j| {
            (0..dim_right)
                .map(|b| m[(i * dim_right + b, j * dim_right + b)])
                .sum()
        }),
        Factor::Right => CMat::from_fn(dim_right, dim_right, |a, b| {
            (0..dim_left)
                .map(|i| m[(i * dim_right + a, i * dim_right + b)])
                .sum()
        }),
    };
    DensityOperator::new(ComplexMatrix::from_raw(reduced))
}

/// One real experiment, one result: draws an eigenvalue from the Born
/// distribution and collapses the state onto the observed eigenspace.
/// Deterministic given `seed`.
pub fn sample_measurement(
    state: &StateVector,
    obs: &Observable,
    seed: u64,
) -> Result<MeasurementOutcome> {
    let dist = state_distribution(state, obs)?;
    let probabilities = dist.probabilities();
    let mut sampler = Sampler::new(seed);
    let k = sampler.categorical(&probabilities);
    let line = &obs.spectrum()[k];
    let post_state = collapse(state, &line.projector)?;
    Ok(MeasurementOutcome {
        eigenvalue: line.eigenvalue,
        probability: probabilities[k],
        post_state,
    })
}

/// Total weight of the interference terms of `ρ` across the eigenspaces of
/// `obs`: `Σ_{j≠k} ‖P_j ρ P_k‖²` (squared entry magnitudes). Zero exactly
/// when `ρ` commutes with the observable.
pub fn interference_norm(rho: &DensityOperator, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            got: rho.dim(),
        });
    }
    let m = rho.matrix().as_matrix();
    let mut total = 0.0;
    for (j, line_j) in obs.spectrum().iter().enumerate() {
        for (k, line_k) in obs.spectrum().iter().enumerate() {
            if j == k {
                continue;
            }
            let block = line_j.projector.as_matrix() * m * line_k.projector.as_matrix();
            total += block.norm_squared();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{inner_product, spectral_decompose, tensor_state};
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn pauli_z() -> Observable {
        spectral_decompose(
            &ComplexMatrix::from_rows(&[vec![r(1.0), r(0.0)], vec![r(0.0), r(-1.0)]]).unwrap(),
        )
        .unwrap()
    }

    fn proj_ket0() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![r(1.0), r(0.0)], vec![r(0.0), r(0.0)]]).unwrap()
    }

    fn proj_ket1() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![r(0.0), r(0.0)], vec![r(0.0), r(1.0)]]).unwrap()
    }

    fn plus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![r(s), r(s)]).unwrap()
    }

    #[test]
    fn collapse_eigenstate_is_identity() {
        let ket0 = StateVector::basis_state(2, 0).unwrap();
        let out = collapse(&ket0, &proj_ket0()).unwrap();
        assert_eq!(out.amplitudes(), ket0.amplitudes());
    }

    #[test]
    fn collapse_superposition_onto_axis() {
        // Oracle: P ξ = (1/√2, 0), normalized (1, 0).
        let out = collapse(&plus(), &proj_ket0()).unwrap();
        assert_abs_diff_eq!(out.amplitude(0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitude(1).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn collapse_on_orthogonal_outcome_errors() {
        let ket0 = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            collapse(&ket0, &proj_ket1()),
            Err(Error::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn collapse_is_idempotent_and_certain_afterwards() {
        let once = collapse(&plus(), &proj_ket0()).unwrap();
        let twice = collapse(&once, &proj_ket0()).unwrap();
        for k in 0..2 {
            assert_abs_diff_eq!(once.amplitude(k).re, twice.amplitude(k).re, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            born_probability(&once, &proj_ket0()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mixture_of_eigenstate_stays_pure() {
        let ket1 = StateVector::basis_state(2, 1).unwrap();
        let mix = von_neumann_mixture(&ket1, &pauli_z()).unwrap();
        let expected = DensityOperator::from_pure(&ket1);
        assert!(
            mix.matrix()
                .sub(expected.matrix())
                .unwrap()
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn mixture_of_equal_superposition_is_maximally_mixed() {
        // Quoted-formula oracle: Σ |(φ, φ_n)|² P_[φ_n] = ½|0⟩⟨0| + ½|1⟩⟨1|.
        let mix = von_neumann_mixture(&plus(), &pauli_z()).unwrap();
        assert_abs_diff_eq!(mix.matrix().entry(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(mix.matrix().entry(1, 1).re, 0.5, epsilon = 1e-15);
        // Interference terms are gone: exact zeros in the measured basis.
        assert_eq!(mix.matrix().entry(0, 1), Complex64::ZERO);
        assert_eq!(mix.matrix().entry(1, 0), Complex64::ZERO);
    }

    #[test]
    fn mixture_commutes_with_observable_and_keeps_expectations() {
        let s = StateVector::normalized(vec![r(3.0), Complex64::new(1.0, 2.0)]).unwrap();
        let obs = pauli_z();
        let mix = von_neumann_mixture(&s, &obs).unwrap();
        let commutator = mix
            .matrix()
            .mul(obs.matrix())
            .unwrap()
            .sub(&obs.matrix().mul(mix.matrix()).unwrap())
            .unwrap();
        assert!(commutator.max_abs() < 1e-12);
        assert_abs_diff_eq!(
            mix.expectation(&obs).unwrap(),
            obs.expectation(&s).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn premeasurement_eigenstate_gives_product_state() {
        let ket1 = StateVector::basis_state(2, 1).unwrap();
        let ready = StateVector::basis_state(2, 0).unwrap();
        let compound = premeasurement(&ket1, &pauli_z(), &ready).unwrap();
        // |1⟩ is the eigenvalue -1 branch, pointer index 0.
        let expected = tensor_state(&ket1, &StateVector::basis_state(2, 0).unwrap()).unwrap();
        let overlap = inner_product(&compound, &expected).unwrap();
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn premeasurement_superposition_entangles() {
        let ready = StateVector::basis_state(2, 0).unwrap();
        let compound = premeasurement(&plus(), &pauli_z(), &ready).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Ascending eigenvalue order: pointer 0 marks the |1⟩ branch,
        // pointer 1 the |0⟩ branch: (1/√2)(|1⟩⊗a₀ + |0⟩⊗a₁).
        assert_abs_diff_eq!(compound.amplitude(2).re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(compound.amplitude(1).re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(compound.amplitude(0).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(compound.amplitude(3).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn premeasurement_pointer_probabilities_match_system_born() {
        let obs = pauli_z();
        let ready = StateVector::basis_state(2, 0).unwrap();
        let s = StateVector::normalized(vec![Complex64::new(1.0, 1.0), r(-2.0)]).unwrap();
        let compound = premeasurement(&s, &obs, &ready).unwrap();
        for (k, line) in obs.spectrum().iter().enumerate() {
            let mut pointer = ComplexMatrix::zeros(2).unwrap().as_matrix().clone();
            pointer[(k, k)] = Complex64::ONE;
            let joint = crate::hilbert::tensor_op(
                &ComplexMatrix::identity(2).unwrap(),
                &ComplexMatrix::from_raw(pointer),
            )
            .unwrap();
            assert_abs_diff_eq!(
                born_probability(&compound, &joint).unwrap(),
                born_probability(&s, &line.projector).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn premeasurement_rejects_small_or_fuzzy_apparatus() {
        let ready1 = StateVector::basis_state(1, 0).unwrap();
        assert!(matches!(
            premeasurement(&plus(), &pauli_z(), &ready1),
            Err(Error::ApparatusTooSmall { needed: 2, got: 1 })
        ));
        assert!(matches!(
            premeasurement(&plus(), &pauli_z(), &plus()),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state_returns_factors() {
        let a = StateVector::normalized(vec![r(1.0), r(2.0)]).unwrap();
        let b = StateVector::normalized(vec![Complex64::new(0.0, 1.0), r(1.0), r(1.0)]).unwrap();
        let joint = DensityOperator::from_pure(&tensor_state(&a, &b).unwrap());
        let left = partial_trace(&joint, 2, 3, Factor::Left).unwrap();
        let right = partial_trace(&joint, 2, 3, Factor::Right).unwrap();
        assert!(
            left.matrix()
                .sub(DensityOperator::from_pure(&a).matrix())
                .unwrap()
                .max_abs()
                < 1e-12
        );
        assert!(
            right
                .matrix()
                .sub(DensityOperator::from_pure(&b).matrix())
                .unwrap()
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn partial_trace_of_maximally_entangled_pairs() {
        // dim-2: (1/√2)(|00⟩ + |11⟩) reduces to I/2 on either side.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::new(vec![r(s), r(0.0), r(0.0), r(s)]).unwrap();
        let rho = DensityOperator::from_pure(&bell);
        for keep in [Factor::Left, Factor::Right] {
            let red = partial_trace(&rho, 2, 2, keep).unwrap();
            let half_id = ComplexMatrix::identity(2).unwrap().scale(r(0.5));
            assert!(red.matrix().sub(&half_id).unwrap().max_abs() < 1e-12);
        }
        // dim-3 maximally entangled pair reduces to I/3.
        let t = 1.0 / 3.0f64.sqrt();
        let mut amps = vec![r(0.0); 9];
        amps[0] = r(t);
        amps[4] = r(t);
        amps[8] = r(t);
        let ghz = StateVector::new(amps).unwrap();
        let red = partial_trace(&DensityOperator::from_pure(&ghz), 3, 3, Factor::Left).unwrap();
        let third_id = ComplexMatrix::identity(3).unwrap().scale(r(1.0 / 3.0));
        assert!(red.matrix().sub(&third_id).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let rho = DensityOperator::from_pure(&StateVector::basis_state(4, 0).unwrap());
        assert!(matches!(
            partial_trace(&rho, 3, 2, Factor::Left),
            Err(Error::NonFactorizableDims { .. })
        ));
    }

    #[test]
    fn reduced_premeasurement_state_is_the_mixture() {
        // The two descriptions agree: trace out the apparatus from the
        // compound pure state and the von Neumann mixture appears.
        let s = StateVector::normalized(vec![Complex64::new(1.0, -1.0), r(2.0)]).unwrap();
        let obs = pauli_z();
        let ready = StateVector::basis_state(2, 0).unwrap();
        let compound = premeasurement(&s, &obs, &ready).unwrap();
        let reduced = partial_trace(
            &DensityOperator::from_pure(&compound),
            2,
            2,
            Factor::Left,
        )
        .unwrap();
        let mixture = von_neumann_mixture(&s, &obs).unwrap();
        assert!(reduced.matrix().sub(mixture.matrix()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sample_measurement_certainty_case() {
        let ket0 = StateVector::basis_state(2, 0).unwrap();
        let out = sample_measurement(&ket0, &pauli_z(), 5).unwrap();
        assert_abs_diff_eq!(out.eigenvalue, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.probability, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.post_state.amplitude(0).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn repeated_measurement_reproduces_result() {
        for seed in 0..20 {
            let first = sample_measurement(&plus(), &pauli_z(), seed).unwrap();
            for reseed in [1u64, 77, 3141] {
                let again =
                    sample_measurement(&first.post_state, &pauli_z(), seed ^ reseed).unwrap();
                assert_eq!(again.eigenvalue, first.eigenvalue);
                assert_abs_diff_eq!(again.probability, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn measurement_statistics_match_born_weights() {
        // Binomial oracle: 1e5 draws of ±1 at p = ½; 3σ = 3·√(¼/1e5).
        let n = 100_000u64;
        let mut plus_count = 0u64;
        for k in 0..n {
            let out = sample_measurement(&plus(), &pauli_z(), crate::rng::stream_seed(42, k))
                .unwrap();
            if out.eigenvalue > 0.0 {
                plus_count += 1;
            }
        }
        let freq = plus_count as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((freq - 0.5).abs() < 3.0 * sigma, "freq = {freq}");
    }

    #[test]
    fn interference_norm_cases() {
        let obs = pauli_z();
        // Mixture output: exactly zero.
        let mix = von_neumann_mixture(&plus(), &obs).unwrap();
        assert_eq!(interference_norm(&mix, &obs).unwrap(), 0.0);
        // Pure superposition: |ρ01|² + |ρ10|² = ¼ + ¼.
        let pure = DensityOperator::from_pure(&plus());
        assert_abs_diff_eq!(interference_norm(&pure, &obs).unwrap(), 0.5, epsilon = 1e-12);
        // Identity observable has a single block: nothing off-diagonal.
        let id = spectral_decompose(&ComplexMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(interference_norm(&pure, &id).unwrap(), 0.0);
    }

    #[test]
    fn density_operator_validation() {
        // Trace 2 rejected.
        assert!(DensityOperator::new(ComplexMatrix::identity(2).unwrap()).is_err());
        // Non-positive rejected: diag(1.5, -0.5).
        let neg = ComplexMatrix::from_rows(&[vec![r(1.5), r(0.0)], vec![r(0.0), r(-0.5)]])
            .unwrap();
        assert!(DensityOperator::new(neg).is_err());
        // Maximally mixed accepted.
        let ok = ComplexMatrix::identity(2).unwrap().scale(r(0.5));
        assert!(DensityOperator::new(ok).is_ok());
    }
}
