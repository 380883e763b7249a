use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;

use super::eigen::jacobi_rotation;
use super::{CMatrix, C64};

const MAX_SWEEPS: usize = 100;

/// Full singular value decomposition `a = u · Σ · v†` with `u` (p×p) and `v`
/// (q×q) unitary and `Σ` the p×q matrix carrying `values` (descending) on its
/// diagonal.
#[derive(Clone, Debug)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl Svd {
    /// `u · Σ · v†`.
    pub fn reconstruct(&self) -> CMatrix {
        let sigma = CMatrix::from_fn(self.u.cols(), self.v.cols(), |i, j| {
            if i == j && i < self.values.len() {
                C64::new(self.values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &(&self.u * &sigma) * &self.v.adjoint()
    }

    /// `σ_max / σ_min`; infinite when the smallest value is zero.
    pub fn condition_number(&self) -> f64 {
        match (self.values.first(), self.values.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        }
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &CMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = tall_svd(&a.adjoint());
        return Svd { values: t.values, u: t.v, v: t.u };
    }
    tall_svd(a)
}

fn tall_svd(a: &CMatrix) -> Svd {
    let (p, q) = a.shape();
    debug_assert!(p >= q);
    let mut w = a.clone();
    let mut v = CMatrix::identity(q);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in i + 1..q {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..p {
                    let (x, y) = (w[(k, i)], w[(k, j)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = jacobi_rotation(alpha, beta, gamma);
                let (u11, u12, u21, u22) = (C64::new(c, 0.0), C64::new(s, 0.0), -ph * s, ph * c);
                for k in 0..p {
                    let (x, y) = (w[(k, i)], w[(k, j)]);
                    w[(k, i)] = x * u11 + y * u21;
                    w[(k, j)] = x * u12 + y * u22;
                }
                for k in 0..q {
                    let (x, y) = (v[(k, i)], v[(k, j)]);
                    v[(k, i)] = x * u11 + y * u21;
                    v[(k, j)] = x * u12 + y * u22;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..q).map(|j| column_norm(&w, j)).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = CMatrix::from_fn(q, q, |i, j| v[(i, order[j])]);

    let smax = values.first().copied().unwrap_or(0.0);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(p);
    for (&j, &s) in order.iter().zip(&values) {
        if s > 1e-13 * smax && s > 0.0 {
            let col: Vec<C64> = (0..p).map(|k| w[(k, j)] / s).collect();
            if let Some(c) = orthonormalize(&cols, col) {
                cols.push(c);
                continue;
            }
        }
        cols.push(complete_one(&cols, p));
    }
    while cols.len() < p {
        cols.push(complete_one(&cols, p));
    }
    let u = CMatrix::from_fn(p, p, |i, j| cols[j][i]);
    Svd { values, u, v }
}

fn column_norm(w: &CMatrix, j: usize) -> f64 {
    let col = CMatrix::from_fn(w.rows(), 1, |i, _| w[(i, j)]);
    col.norm()
}

/// Two passes of modified Gram–Schmidt against `basis`; `None` if the
/// remainder lost more than half its length.
fn orthonormalize(basis: &[Vec<C64>], mut x: Vec<C64>) -> Option<Vec<C64>> {
    let start: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..2 {
        for b in basis {
            let proj: C64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= proj * bi;
            }
        }
    }
    let len: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if len < 0.5 * start || len == 0.0 {
        return None;
    }
    Some(x.into_iter().map(|z| z / len).collect())
}

/// Next orthonormal vector extending `basis`, drawn from the standard basis.
fn complete_one(basis: &[Vec<C64>], p: usize) -> Vec<C64> {
    let mut best: Option<Vec<C64>> = None;
    let mut best_len = -1.0;
    for e in 0..p {
        let mut x = alloc::vec![C64::new(0.0, 0.0); p];
        x[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis {
                let proj: C64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= proj * bi;
                }
            }
        }
        let len: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if len > best_len {
            best_len = len;
            best = Some(x);
        }
        if len > 0.7 {
            break;
        }
    }
    let x = best.expect("p > 0");
    x.into_iter().map(|z| z / best_len).collect()
}
