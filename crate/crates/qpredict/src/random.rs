//! Seeded random generators for states, observables, subspaces, and
//! directions. Used by the randomized invariant checks and the CLI demos;
//! all draws go through [`Sampler`], so everything stays reproducible.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::hilbert::{spectral_decompose, ComplexMatrix, Observable, StateVector};
use crate::lattice::Subspace;
use crate::measurement::DensityOperator;
use crate::epr::Direction;
use crate::rng::Sampler;

fn normal(sampler: &mut Sampler) -> f64 {
    StandardNormal.sample(sampler.rng())
}

fn complex_normal(sampler: &mut Sampler) -> Complex64 {
    Complex64::new(normal(sampler), normal(sampler))
}

/// Haar-like random unit state: complex Gaussian amplitudes, normalized.
pub fn random_state(dim: usize, sampler: &mut Sampler) -> Result<StateVector> {
    let amplitudes: Vec<Complex64> = (0..dim).map(|_| complex_normal(sampler)).collect();
    StateVector::normalized(amplitudes)
}

/// Random self-adjoint matrix `(G + G†)/2` with complex Gaussian `G`.
pub fn random_hermitian(dim: usize, sampler: &mut Sampler) -> Result<ComplexMatrix> {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(sampler))?;
    Ok(g.add(&g.adjoint())?.scale(Complex64::from(0.5)))
}

/// Random observable: a random self-adjoint matrix with its spectral
/// decomposition.
pub fn random_observable(dim: usize, sampler: &mut Sampler) -> Result<Observable> {
    spectral_decompose(&random_hermitian(dim, sampler)?)
}

/// Random self-adjoint matrix with an exactly representable eigenbasis:
/// diagonal with Gaussian eigenvalues. Its spectral projectors are exact
/// 0/1 masks, which makes interference-term cancellations exact.
pub fn random_diagonal_observable(dim: usize, sampler: &mut Sampler) -> Result<Observable> {
    let mut values: Vec<f64> = (0..dim).map(|_| normal(sampler)).collect();
    // Keep the spectrum nondegenerate at the merge tolerance.
    values.sort_by(f64::total_cmp);
    for k in 1..values.len() {
        if values[k] - values[k - 1] < 1e-6 {
            values[k] = values[k - 1] + 1e-6;
        }
    }
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            Complex64::from(values[i])
        } else {
            Complex64::ZERO
        }
    })?;
    spectral_decompose(&m)
}

/// Random `rank`-dimensional subspace: the span of `rank` Gaussian vectors.
pub fn random_subspace(dim: usize, rank: usize, sampler: &mut Sampler) -> Result<Subspace> {
    let vectors: Vec<Vec<Complex64>> = (0..rank)
        .map(|_| (0..dim).map(|_| complex_normal(sampler)).collect())
        .collect();
    Subspace::span(dim, &vectors)
}

/// Random subspace with rank drawn uniformly from `0..=dim`.
pub fn random_subspace_any_rank(dim: usize, sampler: &mut Sampler) -> Result<Subspace> {
    let rank = sampler.index(dim + 1);
    random_subspace(dim, rank, sampler)
}

/// Random mixed state `GG†/tr(GG†)`.
pub fn random_density(dim: usize, sampler: &mut Sampler) -> Result<DensityOperator> {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(sampler))?;
    let gg = ComplexMatrix::from_raw(g.as_matrix() * g.as_matrix().adjoint());
    let trace = gg.trace().re;
    DensityOperator::new(gg.scale(Complex64::from(1.0 / trace)))
}

/// Uniform random direction on the sphere.
pub fn random_direction(sampler: &mut Sampler) -> Direction {
    let cos_theta = 1.0 - 2.0 * sampler.uniform();
    let theta = cos_theta.clamp(-1.0, 1.0).acos();
    let phi = (std::f64::consts::TAU * sampler.uniform()).min(std::f64::consts::TAU - f64::EPSILON);
    Direction::new(theta, phi).expect("sampled angles are in range")
}
