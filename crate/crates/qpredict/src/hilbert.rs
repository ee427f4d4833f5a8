//! Finite-dimensional complex inner-product spaces.
//!
//! States are unit vectors, observables are self-adjoint matrices carrying
//! their spectral decomposition, probabilities come from the Born rule
//! `p = ⟨ξ, Pξ⟩`, and time evolution is the unitary `exp(-i H t / ħ)`
//! applied through the spectral form. Compound systems are tensor products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, max_abs, projector_residual, CMat, CVec};
use crate::{DEFAULT_DIM_LIMIT, TOL_DEGEN, TOL_NORM};

/// Validity threshold for matrices accepted as orthogonal projectors.
/// Looser than [`TOL_NORM`] so that projectors assembled from composed
/// numerics (tensor products of spectral projectors) still qualify.
pub const PROJECTOR_RESIDUAL_TOL: f64 = 1e-8;

/// Dense square complex matrix, the carrier for operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: CMat,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major nested entries. The matrix must be
    /// square with `1 <= dim <= limit`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::from_rows_with_limit(rows, DEFAULT_DIM_LIMIT)
    }

    /// `from_rows` with an explicit dimension cap.
    pub fn from_rows_with_limit(rows: &[Vec<Complex64>], limit: usize) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim, limit)?;
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        let m = CMat::from_fn(dim, dim, |i, j| rows[i][j]);
        Ok(Self { m })
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim, DEFAULT_DIM_LIMIT)?;
        Ok(Self {
            m: CMat::from_fn(dim, dim, f),
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim, DEFAULT_DIM_LIMIT)?;
        Ok(Self {
            m: CMat::identity(dim, dim),
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim, DEFAULT_DIM_LIMIT)?;
        Ok(Self {
            m: CMat::zeros(dim, dim),
        })
    }

    pub(crate) fn from_raw(m: CMat) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Row-major copy of the entries, convenient for serialization.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    /// The underlying nalgebra matrix.
    pub fn as_matrix(&self) -> &CMat {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            m: &self.m * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m - &other.m,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m * &other.m,
        })
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.m)
    }

    /// Max-entry residual of `M - M†`; zero for self-adjoint matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.m)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Max residual against `P² = P`, `P = P†`.
    pub fn projector_residual(&self) -> f64 {
        projector_residual(&self.m)
    }

    pub fn is_projector(&self) -> bool {
        self.projector_residual() <= PROJECTOR_RESIDUAL_TOL
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

fn check_dim(dim: usize, limit: usize) -> Result<()> {
    if dim == 0 || dim > limit {
        return Err(Error::InvalidDimension { dim, limit });
    }
    Ok(())
}

/// Unit-norm complex amplitude vector: the prediction catalog for one system.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    v: CVec,
}

impl StateVector {
    /// Builds a state from amplitudes that must already have norm 1 within
    /// [`TOL_NORM`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len(), DEFAULT_DIM_LIMIT)?;
        let v = CVec::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { v })
    }

    /// Builds a state by normalizing the given amplitudes; errors on the
    /// zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len(), DEFAULT_DIM_LIMIT)?;
        let v = CVec::from_vec(amplitudes);
        let norm = v.norm();
        if norm < crate::TOL_ZERO {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { v: v / Complex64::from(norm) })
    }

    /// Canonical basis state `|k⟩`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim, DEFAULT_DIM_LIMIT)?;
        if k >= dim {
            return Err(Error::InvalidArgument {
                reason: format!("basis index {k} out of range for dimension {dim}"),
            });
        }
        let mut v = CVec::zeros(dim);
        v[k] = Complex64::ONE;
        Ok(Self { v })
    }

    pub(crate) fn from_raw_unchecked(v: CVec) -> Self {
        Self { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.v[k]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.v.as_slice()
    }

    pub fn as_vector(&self) -> &CVec {
        &self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

/// One eigenvalue of an observable together with the orthogonal projector
/// onto its eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralLine {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
    pub multiplicity: usize,
}

/// Self-adjoint matrix with its spectral decomposition. Eigenvalues are
/// sorted ascending; eigenvalues closer than [`TOL_DEGEN`] are merged into
/// one degenerate eigenspace.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Vec<SpectralLine>,
}

impl Observable {
    /// Spectrally decomposes `m`; synonym of [`spectral_decompose`].
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        spectral_decompose(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalue/projector pairs in ascending eigenvalue order.
    pub fn spectrum(&self) -> &[SpectralLine] {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|l| l.eigenvalue).collect()
    }

    /// Expectation value `⟨ξ, X ξ⟩` of this observable in the given state.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: state.dim(),
            });
        }
        Ok(state.v.dotc(&(self.matrix.as_matrix() * &state.v)).re)
    }

    /// Checks every type invariant, returning the first violation.
    /// All tolerances are [`TOL_NORM`].
    pub fn validate(&self) -> Result<()> {
        let asym = self.matrix.hermiticity_residual();
        if asym > TOL_NORM {
            return Err(Error::NotSelfAdjoint {
                max_asymmetry: asym,
            });
        }
        let dim = self.dim();
        let mut projector_sum = CMat::zeros(dim, dim);
        let mut reconstruction = CMat::zeros(dim, dim);
        for (k, line) in self.spectrum.iter().enumerate() {
            let p = line.projector.as_matrix();
            if projector_residual(p) > TOL_NORM {
                return Err(Error::InvariantViolation {
                    reason: format!("spectral projector {k} is not a projector"),
                });
            }
            for other in &self.spectrum[k + 1..] {
                if max_abs(&(p * other.projector.as_matrix())) > TOL_NORM {
                    return Err(Error::InvariantViolation {
                        reason: format!("spectral projector {k} not orthogonal to a peer"),
                    });
                }
            }
            projector_sum += p;
            reconstruction += p * Complex64::from(line.eigenvalue);
        }
        if max_abs(&(&projector_sum - CMat::identity(dim, dim))) > TOL_NORM {
            return Err(Error::InvariantViolation {
                reason: "spectral projectors do not sum to the identity".into(),
            });
        }
        if max_abs(&(&reconstruction - self.matrix.as_matrix())) > TOL_NORM {
            return Err(Error::InvariantViolation {
                reason: "spectral form does not reconstruct the matrix".into(),
            });
        }
        for pair in self.spectrum.windows(2) {
            if pair[1].eigenvalue <= pair[0].eigenvalue {
                return Err(Error::InvariantViolation {
                    reason: "eigenvalues are not strictly increasing".into(),
                });
            }
        }
        Ok(())
    }
}

/// Time-evolution parameters. `ħ` defaults to 1 (natural units) and must be
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    hbar: f64,
    t: f64,
}

impl EvolutionConfig {
    /// Evolution for duration `t` with `ħ = 1`.
    pub fn new(t: f64) -> Self {
        Self { hbar: 1.0, t }
    }

    pub fn with_hbar(t: f64, hbar: f64) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidArgument {
                reason: format!("hbar must be positive and finite, got {hbar}"),
            });
        }
        Ok(Self { hbar, t })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Inner product `(a, b) = Σ conj(a_k)·b_k`, conjugate-linear in the first
/// argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.v.dotc(&b.v))
}

/// Born rule: the probability `⟨ξ, P ξ⟩` of the outcome whose eigenspace
/// projector is `P`. For a rank-1 projector `|ξ₀⟩⟨ξ₀|` this is `|(ξ, ξ₀)|²`.
pub fn born_probability(state: &StateVector, eigenprojector: &ComplexMatrix) -> Result<f64> {
    if state.dim() != eigenprojector.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: eigenprojector.dim(),
        });
    }
    let residual = eigenprojector.projector_residual();
    if residual > PROJECTOR_RESIDUAL_TOL {
        return Err(Error::NotAProjector { residual });
    }
    let p = state.v.dotc(&(eigenprojector.as_matrix() * &state.v)).re;
    if !(-TOL_NORM..=1.0 + TOL_NORM).contains(&p) {
        return Err(Error::InvariantViolation {
            reason: format!("Born probability {p} outside [0, 1]"),
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Spectral decomposition of a self-adjoint matrix into eigenvalue /
/// eigenprojector pairs, ascending in eigenvalue, with eigenvalues closer
/// than [`TOL_DEGEN`] merged into one eigenspace.
pub fn spectral_decompose(m: &ComplexMatrix) -> Result<Observable> {
    let asym = m.hermiticity_residual();
    if asym > TOL_NORM {
        return Err(Error::NotSelfAdjoint {
            max_asymmetry: asym,
        });
    }
    // Symmetrize before the eigensolver so roundoff in the input cannot
    // leak into complex eigenvalues.
    let h = (m.as_matrix() + m.as_matrix().adjoint()) * Complex64::from(0.5);
    let eig = h.symmetric_eigen();

    let dim = m.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut spectrum: Vec<SpectralLine> = Vec::new();
    let mut group: Vec<usize> = Vec::new();
    let flush = |group: &mut Vec<usize>, spectrum: &mut Vec<SpectralLine>| {
        if group.is_empty() {
            return;
        }
        let mut projector = CMat::zeros(dim, dim);
        let mut value = 0.0;
        for &idx in group.iter() {
            let v: CVec = eig.eigenvectors.column(idx).clone_owned();
            projector += &v * v.adjoint();
            value += eig.eigenvalues[idx];
        }
        value /= group.len() as f64;
        spectrum.push(SpectralLine {
            eigenvalue: value,
            projector: ComplexMatrix::from_raw(projector),
            multiplicity: group.len(),
        });
        group.clear();
    };
    for &idx in &order {
        if let Some(&last) = group.last() {
            if eig.eigenvalues[idx] - eig.eigenvalues[last] > TOL_DEGEN {
                flush(&mut group, &mut spectrum);
            }
        }
        group.push(idx);
    }
    flush(&mut group, &mut spectrum);

    let obs = Observable {
        matrix: m.clone(),
        spectrum,
    };
    obs.validate()?;
    Ok(obs)
}

/// Unitary time evolution `ξ(t) = Σ_k exp(-i·E_k·t/ħ)·P_k·ξ(0)` through the
/// spectral decomposition of the Hamiltonian.
pub fn evolve(
    state: &StateVector,
    hamiltonian: &Observable,
    cfg: &EvolutionConfig,
) -> Result<StateVector> {
    if state.dim() != hamiltonian.dim() {
        return Err(Error::DimensionMismatch {
            expected: hamiltonian.dim(),
            got: state.dim(),
        });
    }
    let mut out = CVec::zeros(state.dim());
    for line in hamiltonian.spectrum() {
        let phase = Complex64::new(0.0, -line.eigenvalue * cfg.t() / cfg.hbar()).exp();
        out += (line.projector.as_matrix() * &state.v) * phase;
    }
    // Constructor re-checks unit norm, a free unitarity self-check.
    StateVector::new(out.as_slice().to_vec())
}

/// Tensor product of states; the compound amplitude vector in lexicographic
/// (left-major) index order.
pub fn tensor_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = a.dim() * b.dim();
    check_dim(dim, DEFAULT_DIM_LIMIT)?;
    let v = a.v.kronecker(&b.v);
    Ok(StateVector::from_raw_unchecked(CVec::from_vec(
        v.as_slice().to_vec(),
    )))
}

/// Tensor (Kronecker) product of operators.
pub fn tensor_op(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim() * b.dim();
    check_dim(dim, DEFAULT_DIM_LIMIT)?;
    Ok(ComplexMatrix::from_raw(
        a.as_matrix().kronecker(b.as_matrix()),
    ))
}
