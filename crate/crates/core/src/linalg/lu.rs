use alloc::vec::Vec;

use num_traits::Zero;

use super::{CMatrix, C64};
use crate::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_RTOL · max|entry|` is singular.
pub const PIVOT_RTOL: f64 = 1e-12;

/// Packed LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let threshold = PIVOT_RTOL * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= threshold || best == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Solve `A·X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut x = CMatrix::zeros(n, b.cols());
        let mut y = Vec::with_capacity(n);
        for c in 0..b.cols() {
            y.clear();
            for i in 0..n {
                let mut s = b[(self.perm[i], c)];
                for (j, yj) in y.iter().enumerate() {
                    s -= self.lu[(i, j)] * *yj;
                }
                y.push(s);
            }
            for i in (0..n).rev() {
                let mut s: C64 = y[i];
                for j in i + 1..n {
                    s -= self.lu[(i, j)] * x[(j, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve(&CMatrix::identity(self.lu.rows()))
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        let mut d: C64 = (0..n).map(|i| self.lu[(i, i)]).product();
        // parity of the permutation
        let mut seen = alloc::vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                d = -d;
            }
        }
        d
    }
}

impl CMatrix {
    /// Inverse via pivoted LU; [`Error::SingularMatrix`] when a pivot is
    /// below `1e-12 · max|entry|`.
    pub fn inverse(&self) -> Result<CMatrix> {
        Ok(Lu::new(self)?.inverse())
    }
}
