use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;

use super::{CMatrix, C64};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a hermitian matrix, eigenvalues ascending; column `i` of
/// `vectors` belongs to `values[i]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Unitary 2×2 rotation `U = [[c, s], [−s·ph, c·ph]]` with
/// `U†·[[a, b], [b̄, d]]·U` diagonal. Returns `(c, s, ph)`.
pub(crate) fn jacobi_rotation(a: f64, d: f64, b: C64) -> (f64, f64, C64) {
    let r = b.norm();
    let ph = b.conj() / r;
    let theta = (d - a) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, ph)
}

/// Cyclic complex Jacobi eigensolver. Only the hermitian part of `a` is used.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows();
    let mut m = (a + &a.adjoint()).scale_real(0.5);
    let mut v = CMatrix::identity(n);
    let total = m.norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if b.norm() <= 1e-18 * (app.abs() + aqq.abs()) || b.norm() < f64::MIN_POSITIVE {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let (c, s, ph) = jacobi_rotation(app, aqq, b);
                let (u11, u12, u21, u22) = (C64::new(c, 0.0), C64::new(s, 0.0), -ph * s, ph * c);
                for k in 0..n {
                    let (xp, xq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = xp * u11 + xq * u21;
                    m[(k, q)] = xp * u12 + xq * u22;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * u11 + vq * u21;
                    v[(k, q)] = vp * u12 + vq * u22;
                }
                for k in 0..n {
                    let (xp, xq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = u11.conj() * xp + u21.conj() * xq;
                    m[(q, k)] = u12.conj() * xp + u22.conj() * xq;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}
