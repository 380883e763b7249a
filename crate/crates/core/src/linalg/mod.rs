//! Dense complex matrices and the group involution on `GL_N(C)`.
//!
//! `h ↦ h# = (h†)⁻¹` is an anti-holomorphic involution of `GL_N(C)` with fixed
//! point group `U(N)`. Its differential at the identity is the anti-linear
//! Lie-algebra involution `X ↦ −X†`, whose fixed points are the
//! anti-hermitian matrices `u(N)`.

mod eigen;
mod lu;
mod matrix;
mod svd;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use lu::Lu;
pub use matrix::{BlockStructure, CMatrix, C64};
pub use svd::{svd, Svd};

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;

use crate::{scale_of, Error, Result};

/// `[X, Y] = XY − YX`.
pub fn commutator(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch { expected: x.shape(), found: y.shape() });
    }
    Ok(&(x * y) - &(y * x))
}

/// The group involution `h# = (h†)⁻¹`.
pub fn sharp(h: &CMatrix) -> Result<CMatrix> {
    h.adjoint().inverse()
}

/// The differential of [`sharp`] at the identity: `X ↦ −X†`.
pub fn lie_sharp(x: &CMatrix) -> CMatrix {
    -&x.adjoint()
}

/// `‖h†h − I‖_F ≤ tol`.
pub fn is_unitary(h: &CMatrix, tol: f64) -> bool {
    if !h.is_square() {
        return false;
    }
    let defect = &(&h.adjoint() * h) - &CMatrix::identity(h.rows());
    defect.norm() <= tol
}

/// Hermitian positive definite square root: returns `h = h†` with `h·h† = k`,
/// so that `k = h·(h#)⁻¹`.
///
/// `k` is symmetrized before the eigendecomposition when `‖k − k†‖ ≤ tol·‖k‖`;
/// larger defects are rejected. Eigenvalues at or below `tol·‖k‖` are rejected.
pub fn hermitian_sqrt(k: &CMatrix, tol: f64) -> Result<CMatrix> {
    if !k.is_square() {
        return Err(Error::NotSquare { rows: k.rows(), cols: k.cols() });
    }
    let scale = scale_of(k.norm());
    let kh = k.adjoint();
    let defect = (k - &kh).norm();
    if defect > tol * scale {
        return Err(Error::NotHermitian { defect });
    }
    let sym = (k + &kh).scale_real(0.5);
    let eig = hermitian_eigen(&sym);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min <= tol * scale {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let roots: alloc::vec::Vec<f64> = eig.values.iter().map(|&l| l.sqrt()).collect();
    let h = eig.vectors.mul_diag_real(&roots) * &eig.vectors.adjoint();
    // exact hermiticity of the output
    Ok((&h + &h.adjoint()).scale_real(0.5))
}
