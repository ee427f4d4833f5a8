//! The orthocomplemented lattice of closed subspaces ("quantum logic") and
//! the classical powerset lattice it is contrasted with.
//!
//! Subspaces are ordered by inclusion; meet is intersection, join is the
//! closed span of the union, and the orthocomplement is the orthogonal
//! subspace. Compatible outcomes generate Boolean (distributive)
//! sublattices; incompatible ones do not, and [`distributivity_holds`]
//! exhibits the difference.
//!
//! Rank decisions (span, kernel, intersection) all use the cutoff
//! [`crate::TOL_RANK`]. Subspace equality is mutual [`leq`], never
//! basis-list comparison, because bases are not unique.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, Observable, StateVector};
use crate::linalg::{column_span_basis, kernel_basis, max_abs, CMat, CVec};
use crate::{DEFAULT_DIM_LIMIT, TOL_RANK};

/// Eigenspace-count guard for [`boolean_sublattice`] (2^k elements).
pub const BOOLEAN_EIGENSPACE_LIMIT: usize = 12;

/// A closed subspace of a finite-dimensional complex space, held as an
/// orthonormal basis (`ambient_dim x rank` column matrix; rank may be 0).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMat,
}

impl Subspace {
    /// The zero subspace ∅.
    pub fn zero(ambient_dim: usize) -> Result<Self> {
        check_ambient(ambient_dim)?;
        Ok(Self {
            ambient_dim,
            basis: CMat::zeros(ambient_dim, 0),
        })
    }

    /// The whole space 𝟏.
    pub fn full(ambient_dim: usize) -> Result<Self> {
        check_ambient(ambient_dim)?;
        Ok(Self {
            ambient_dim,
            basis: CMat::identity(ambient_dim, ambient_dim),
        })
    }

    /// Span of the given vectors, orthonormalized with rank cutoff
    /// [`TOL_RANK`]. Dependent or zero vectors simply do not raise the rank.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        check_ambient(ambient_dim)?;
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        let cols: Vec<CVec> = vectors.iter().map(|v| CVec::from_vec(v.clone())).collect();
        let m = crate::linalg::matrix_from_columns(ambient_dim, &cols);
        Ok(Self {
            ambient_dim,
            basis: column_span_basis(&m, TOL_RANK),
        })
    }

    /// The one-dimensional subspace spanned by a state.
    pub fn line(state: &StateVector) -> Self {
        Self {
            ambient_dim: state.dim(),
            basis: CMat::from_columns(&[state.as_vector().clone()]),
        }
    }

    /// Range of an orthogonal projector.
    pub fn from_projector(p: &ComplexMatrix) -> Result<Self> {
        let residual = p.projector_residual();
        if residual > crate::hilbert::PROJECTOR_RESIDUAL_TOL {
            return Err(Error::NotAProjector { residual });
        }
        Ok(Self {
            ambient_dim: p.dim(),
            basis: column_span_basis(p.as_matrix(), TOL_RANK),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// Orthonormal basis vectors (may be empty).
    pub fn basis_vectors(&self) -> Vec<Vec<Complex64>> {
        (0..self.rank())
            .map(|k| self.basis.column(k).iter().copied().collect())
            .collect()
    }

    /// The orthogonal projector onto this subspace.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_raw(&self.basis * self.basis.adjoint())
    }

    /// Mutual inclusion within tolerance; the only meaningful equality.
    pub fn coincides_with(&self, other: &Self) -> Result<bool> {
        Ok(leq(self, other)? && leq(other, self)?)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }
}

fn check_ambient(dim: usize) -> Result<()> {
    if dim == 0 || dim > DEFAULT_DIM_LIMIT {
        return Err(Error::InvalidDimension {
            dim,
            limit: DEFAULT_DIM_LIMIT,
        });
    }
    Ok(())
}

/// Partial order: `E ≤ F` iff every basis vector of `E` lies in `span(F)`
/// (projection residual below [`TOL_RANK`]).
pub fn leq(e: &Subspace, f: &Subspace) -> Result<bool> {
    e.check_ambient(f)?;
    let pf = f.projector();
    for k in 0..e.rank() {
        let v = e.basis.column(k);
        let residual = (v.clone_owned() - pf.as_matrix() * v).norm();
        if residual > TOL_RANK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Meet (greatest lower bound): the intersection, computed as the kernel of
/// `(I - P_E) + (I - P_F)` with the rank cutoff [`TOL_RANK`].
pub fn meet(e: &Subspace, f: &Subspace) -> Result<Subspace> {
    e.check_ambient(f)?;
    let dim = e.ambient_dim;
    let id = CMat::identity(dim, dim);
    let m = (id.clone() - e.projector().as_matrix()) + (id - f.projector().as_matrix());
    Ok(Subspace {
        ambient_dim: dim,
        basis: kernel_basis(&m, TOL_RANK),
    })
}

/// Join (least upper bound): the closed span of the union of bases.
pub fn join(e: &Subspace, f: &Subspace) -> Result<Subspace> {
    e.check_ambient(f)?;
    let dim = e.ambient_dim;
    let stacked = CMat::from_fn(dim, e.rank() + f.rank(), |i, j| {
        if j < e.rank() {
            e.basis[(i, j)]
        } else {
            f.basis[(i, j - e.rank())]
        }
    });
    Ok(Subspace {
        ambient_dim: dim,
        basis: column_span_basis(&stacked, TOL_RANK),
    })
}

/// The orthogonal subspace `E⊥`, the range of `I - P_E`.
pub fn orthocomplement(e: &Subspace) -> Subspace {
    let dim = e.ambient_dim;
    let m = CMat::identity(dim, dim) - e.projector().as_matrix();
    Subspace {
        ambient_dim: dim,
        basis: column_span_basis(&m, TOL_RANK),
    }
}

/// Disjunction derived from meet and complement: `A ∨ B = (A⊥ ∧ B⊥)⊥`.
/// Coincides with [`join`].
pub fn disjunction(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    Ok(orthocomplement(&meet(
        &orthocomplement(a),
        &orthocomplement(b),
    )?))
}

/// Compatibility: true iff the orthogonal projectors commute within
/// [`TOL_RANK`] (max-entry norm of the commutator).
pub fn commutes(e: &Subspace, f: &Subspace) -> Result<bool> {
    e.check_ambient(f)?;
    let pe = e.projector();
    let pf = f.projector();
    let commutator =
        pe.as_matrix() * pf.as_matrix() - pf.as_matrix() * pe.as_matrix();
    Ok(max_abs(&commutator) <= TOL_RANK)
}

/// The Boolean sublattice generated by one observable: all joins of subsets
/// of its eigenspaces, 2^k elements for k eigenspaces, in subset-mask order
/// (mask 0 is ∅, the full mask is 𝟏).
pub fn boolean_sublattice(obs: &Observable) -> Result<Vec<Subspace>> {
    let k = obs.spectrum().len();
    if k > BOOLEAN_EIGENSPACE_LIMIT {
        return Err(Error::TooManyEigenspaces {
            count: k,
            limit: BOOLEAN_EIGENSPACE_LIMIT,
        });
    }
    let dim = obs.dim();
    let eigenspaces: Vec<Subspace> = obs
        .spectrum()
        .iter()
        .map(|line| Subspace::from_projector(&line.projector))
        .collect::<Result<Vec<_>>>()?;
    let mut family = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        // Eigenspace bases are mutually orthogonal, so their union is
        // already orthonormal; stack columns directly.
        let members: Vec<&Subspace> = (0..k)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| &eigenspaces[j])
            .collect();
        let total_rank: usize = members.iter().map(|s| s.rank()).sum();
        let mut basis = CMat::zeros(dim, total_rank);
        let mut col = 0;
        for s in members {
            for j in 0..s.rank() {
                basis.set_column(col, &s.basis.column(j));
                col += 1;
            }
        }
        family.push(Subspace {
            ambient_dim: dim,
            basis,
        });
    }
    Ok(family)
}

/// Distributive law for one triple:
/// `A ∧ (B ∨ C) = (A ∧ B) ∨ (A ∧ C)` within tolerance.
pub fn distributivity_holds(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<bool> {
    let left = meet(a, &join(b, c)?)?;
    let right = join(&meet(a, b)?, &meet(a, c)?)?;
    left.coincides_with(&right)
}

/// Exhaustive distributivity check over every ordered triple of a family.
pub fn all_triples_distributive(family: &[Subspace]) -> Result<bool> {
    for a in family {
        for b in family {
            for c in family {
                if !distributivity_holds(a, b, c)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// An event over a finite sample space: a subset of `{0, …, universe-1}`.
/// The powerset lattice of these is the Boolean comparison case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalEvent {
    universe_size: usize,
    members: BTreeSet<usize>,
}

impl ClassicalEvent {
    pub fn new(universe_size: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::InvalidArgument {
                reason: "universe must be nonempty".into(),
            });
        }
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= universe_size) {
            return Err(Error::InvalidArgument {
                reason: format!("member {bad} outside universe of size {universe_size}"),
            });
        }
        Ok(Self {
            universe_size,
            members,
        })
    }

    pub fn empty(universe_size: usize) -> Result<Self> {
        Self::new(universe_size, [])
    }

    pub fn all(universe_size: usize) -> Result<Self> {
        Self::new(universe_size, 0..universe_size)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.universe_size != other.universe_size {
            return Err(Error::DimensionMismatch {
                expected: self.universe_size,
                got: other.universe_size,
            });
        }
        Ok(())
    }
}

/// Set inclusion.
pub fn c_leq(a: &ClassicalEvent, b: &ClassicalEvent) -> Result<bool> {
    a.check_universe(b)?;
    Ok(a.members.is_subset(&b.members))
}

/// Set intersection.
pub fn c_meet(a: &ClassicalEvent, b: &ClassicalEvent) -> Result<ClassicalEvent> {
    a.check_universe(b)?;
    Ok(ClassicalEvent {
        universe_size: a.universe_size,
        members: a.members.intersection(&b.members).copied().collect(),
    })
}

/// Set union.
pub fn c_join(a: &ClassicalEvent, b: &ClassicalEvent) -> Result<ClassicalEvent> {
    a.check_universe(b)?;
    Ok(ClassicalEvent {
        universe_size: a.universe_size,
        members: a.members.union(&b.members).copied().collect(),
    })
}

/// Set complement within the universe.
pub fn c_complement(a: &ClassicalEvent) -> ClassicalEvent {
    ClassicalEvent {
        universe_size: a.universe_size,
        members: (0..a.universe_size)
            .filter(|m| !a.members.contains(m))
            .collect(),
    }
}
