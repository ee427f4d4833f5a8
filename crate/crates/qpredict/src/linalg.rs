//! Internal nalgebra helpers shared by the public modules.
//!
//! Span and kernel bases come from Hermitian eigendecompositions rather
//! than the general SVD: every matrix we decompose is (or is turned into)
//! Hermitian positive semidefinite, and the Hermitian path is accurate for
//! complex matrices where nalgebra's two-sided SVD is not. Rank decisions
//! apply the caller's cutoff to the eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) type CMat = DMatrix<Complex64>;
pub(crate) type CVec = DVector<Complex64>;

/// Largest entry magnitude, zero for empty matrices.
pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max-entry residual of `M - M†`.
pub(crate) fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Max-entry residual against the projector algebra: `max(|P² - P|, |P - P†|)`.
pub(crate) fn projector_residual(p: &CMat) -> f64 {
    let idem = max_abs(&(p * p - p));
    idem.max(hermiticity_residual(p))
}

/// Eigenvectors of a Hermitian matrix whose eigenvalues pass `keep`,
/// as orthonormal matrix columns.
fn hermitian_eigenbasis(h: &CMat, keep: impl Fn(f64) -> bool) -> CMat {
    let dim = h.nrows();
    let symmetrized = (h + h.adjoint()) * Complex64::from(0.5);
    let eig = symmetrized.symmetric_eigen();
    let cols: Vec<CVec> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, lambda)| keep(**lambda))
        .map(|(k, _)| eig.eigenvectors.column(k).clone_owned())
        .collect();
    matrix_from_columns(dim, &cols)
}

/// Orthonormal basis (as matrix columns) of the column span of `m`, the
/// range of the Gram matrix `m·m†`. Directions whose Gram eigenvalue is
/// `<= cutoff` are discarded. Returns a `rows x rank` matrix; rank may be
/// zero.
pub(crate) fn column_span_basis(m: &CMat, cutoff: f64) -> CMat {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return CMat::zeros(rows, 0);
    }
    let gram = m * m.adjoint();
    hermitian_eigenbasis(&gram, |lambda| lambda > cutoff)
}

/// Orthonormal basis of the kernel of a Hermitian positive semidefinite
/// matrix: the eigenvectors with eigenvalue `<= cutoff`.
pub(crate) fn kernel_basis(m: &CMat, cutoff: f64) -> CMat {
    assert_eq!(m.nrows(), m.ncols(), "kernel_basis expects a square matrix");
    hermitian_eigenbasis(m, |lambda| lambda <= cutoff)
}

/// `from_columns` that tolerates an empty column list.
pub(crate) fn matrix_from_columns(rows: usize, cols: &[CVec]) -> CMat {
    if cols.is_empty() {
        CMat::zeros(rows, 0)
    } else {
        CMat::from_columns(cols)
    }
}
