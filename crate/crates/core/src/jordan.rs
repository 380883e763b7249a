//! The type I hermitian Jordan triple `Z = C^{p×q}`.
//!
//! Triple product `{x; y; z} = (x·y†·z + z·y†·x) / 2`. With this
//! normalization the tripotents (`{e; e; e} = e`) are exactly the partial
//! isometries, and the matrix units `E_11, …, E_rr` form a frame of minimal
//! orthogonal tripotents. Every `z` has a spectral decomposition
//! `z = Σ t_i·k(e_i)` with `0 ≤ t_1 ≤ ⋯ ≤ t_r`, realized here by the SVD.

use alloc::vec::Vec;

use crate::linalg::{svd, CMatrix, C64};
use crate::{scale_of, Error, Result};

/// `C^{p×q}` with rank `min(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleSpace {
    p: usize,
    q: usize,
}

impl TripleSpace {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::DimensionMismatch { expected: (1, 1), found: (p, q) });
        }
        Ok(Self { p, q })
    }

    pub fn of(z: &CMatrix) -> Result<Self> {
        Self::new(z.rows(), z.cols())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.p.min(self.q)
    }

    /// The standard frame `E_11, …, E_rr`.
    pub fn standard_frame(&self) -> Vec<CMatrix> {
        (0..self.rank()).map(|i| CMatrix::unit(self.p, self.q, i, i)).collect()
    }
}

fn same_shape(ms: &[&CMatrix]) -> Result<()> {
    let shape = ms[0].shape();
    for m in &ms[1..] {
        if m.shape() != shape {
            return Err(Error::DimensionMismatch { expected: shape, found: m.shape() });
        }
    }
    Ok(())
}

/// `{x; y; z} = (x·y†·z + z·y†·x) / 2`: linear in `x` and `z`, anti-linear
/// in `y`, symmetric in `x ↔ z`.
pub fn triple_product(x: &CMatrix, y: &CMatrix, z: &CMatrix) -> Result<CMatrix> {
    same_shape(&[x, y, z])?;
    let yh = y.adjoint();
    let xyz = &(x * &yh) * z;
    let zyx = &(z * &yh) * x;
    Ok((&xyz + &zyx).scale_real(0.5))
}

/// `‖{e; e; e} − e‖ ≤ tol·max(‖e‖, floor)`.
pub fn is_tripotent(e: &CMatrix, tol: f64) -> bool {
    let eee = triple_product(e, e, e).expect("shapes agree");
    (&eee - e).norm() <= tol * scale_of(e.norm())
}

/// Orthogonality of tripotents: `e₁·e₂† = 0` and `e₁†·e₂ = 0`, each up to
/// `tol·‖e₁‖·‖e₂‖`.
pub fn are_orthogonal(e1: &CMatrix, e2: &CMatrix, tol: f64) -> Result<bool> {
    same_shape(&[e1, e2])?;
    if !is_tripotent(e1, tol) || !is_tripotent(e2, tol) {
        return Err(Error::NotTripotent);
    }
    let bound = tol * scale_of(e1.norm() * e2.norm());
    Ok((e1 * &e2.adjoint()).norm() <= bound && (&e1.adjoint() * e2).norm() <= bound)
}

/// `z = u · diag(t) · v†` with `t` ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    /// Singular values `0 ≤ t_1 ≤ ⋯ ≤ t_r`.
    pub t: Vec<f64>,
    /// `p×p` unitary; column `i` pairs with `t[i]`.
    pub u: CMatrix,
    /// `q×q` unitary; column `i` pairs with `t[i]`.
    pub v: CMatrix,
}

impl SpectralDecomposition {
    pub fn rank(&self) -> usize {
        self.t.len()
    }

    /// Frame tripotent `k·e_i = u·E_ii·v†`.
    pub fn frame_element(&self, i: usize) -> CMatrix {
        let (p, q) = (self.u.rows(), self.v.rows());
        CMatrix::from_fn(p, q, |a, b| self.u[(a, i)] * self.v[(b, i)].conj())
    }

    /// The transported frame `k·e_1, …, k·e_r`.
    pub fn frame(&self) -> Vec<CMatrix> {
        (0..self.rank()).map(|i| self.frame_element(i)).collect()
    }
}

/// Singular values ascending, with unitary frame transporters.
pub fn spectral(z: &CMatrix) -> SpectralDecomposition {
    let s = svd(z);
    let r = s.values.len();
    let p = s.u.rows();
    let q = s.v.rows();
    // reorder the first r columns ascending; trailing columns stay put
    let col = |i: usize| if i < r { r - 1 - i } else { i };
    let u = CMatrix::from_fn(p, p, |a, i| s.u[(a, col(i))]);
    let v = CMatrix::from_fn(q, q, |b, i| s.v[(b, col(i))]);
    let t = s.values.iter().rev().copied().collect();
    SpectralDecomposition { t, u, v }
}

/// `u · diag(t, padded with zeros) · v†`.
pub fn reconstruct(sd: &SpectralDecomposition) -> CMatrix {
    let (p, q) = (sd.u.rows(), sd.v.rows());
    let sigma = CMatrix::from_fn(p, q, |i, j| {
        if i == j && i < sd.t.len() {
            C64::new(sd.t[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &(&sd.u * &sigma) * &sd.v.adjoint()
}

/// The quadratic vector field `z ↦ {z; u; z}`.
pub fn quadratic_field(u: &CMatrix, z: &CMatrix) -> Result<CMatrix> {
    triple_product(z, u, z)
}

/// Polynomial vector fields on `Z` of degree at most two.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorField {
    /// `z ↦ u`.
    Constant(CMatrix),
    /// `z ↦ {z; u; z}`.
    Quadratic(CMatrix),
}

impl VectorField {
    pub fn eval(&self, z: &CMatrix) -> Result<CMatrix> {
        match self {
            VectorField::Constant(u) => {
                same_shape(&[u, z])?;
                Ok(u.clone())
            }
            VectorField::Quadratic(u) => quadratic_field(u, z),
        }
    }

    /// Exact derivative at `z` applied to `w`; `2{z; u; w}` for a quadratic field.
    pub fn derivative(&self, z: &CMatrix, w: &CMatrix) -> Result<CMatrix> {
        match self {
            VectorField::Constant(u) => {
                same_shape(&[u, z, w])?;
                Ok(CMatrix::zeros(z.rows(), z.cols()))
            }
            VectorField::Quadratic(u) => Ok(triple_product(z, u, w)?.scale_real(2.0)),
        }
    }
}

/// Lie bracket `[X, Y](z) = DY(z)·X(z) − DX(z)·Y(z)`.
pub fn field_bracket(x: &VectorField, y: &VectorField, z: &CMatrix) -> Result<CMatrix> {
    let xz = x.eval(z)?;
    let yz = y.eval(z)?;
    Ok(&y.derivative(z, &xz)? - &x.derivative(z, &yz)?)
}
