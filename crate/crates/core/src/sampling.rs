//! Seeded random matrices. Every generator is deterministic for a given
//! [`SampleRng`] state.

use core::f64::consts::TAU;

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::connection::ConnectionData;
use crate::linalg::{svd, CMatrix, C64};
use crate::quiver::{double, Arrow, DoubleQuiver, DoubleQuiverRep, Quiver};
use crate::weights::{decompose, WeightData};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed unit disk.
pub fn disk<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let r = rng.gen::<f64>().sqrt();
    C64::from_polar(r, TAU * rng.gen::<f64>())
}

/// Uniform point on the unit circle.
pub fn unit_circle<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, TAU * rng.gen::<f64>())
}

/// Matrix with i.i.d. entries uniform in the unit disk.
pub fn disk_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| disk(rng))
}

/// `I + R` with `R` a disk matrix, resampled until its condition number is
/// at most `max_cond`.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> CMatrix {
    loop {
        let g = &CMatrix::identity(n) + &disk_matrix(rng, n, n);
        if svd(&g).condition_number() <= max_cond {
            return g;
        }
    }
}

/// Unitary matrix: the left singular vectors of a random square matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    svd(&disk_matrix(rng, n, n)).u
}

/// `U·diag(σ)·V†` with random unitaries, `σ₁ = 1`, `σ_n = cond` and the
/// rest log-uniform in between, so the condition number is exactly `cond`
/// (for `n ≥ 2`).
pub fn conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize, cond: f64) -> CMatrix {
    let top = cond.max(1.0).ln();
    let sigma: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => 1.0,
            _ if i + 1 == n => top.exp(),
            _ => (top * rng.gen::<f64>()).exp(),
        })
        .collect();
    let u = unitary(rng, n);
    let v = unitary(rng, n);
    &u.mul_diag_real(&sigma) * &v.adjoint()
}

/// Rank-1 weights for `n` basis vectors drawn from `lo..=hi`.
pub fn rank_one_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Random connection data supported exactly on the allowed shift pattern.
pub fn pattern_connection<R: Rng + ?Sized>(rng: &mut R, weights: &[i64]) -> ConnectionData {
    let d = decompose(&WeightData::rank_one(weights).expect("nonempty weights"));
    ConnectionData::on_pattern(d, |_, _, _| disk(rng)).expect("rank one")
}

/// Doubled chain quiver on `dims` with random arrow matrices.
pub fn chain_rep<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> DoubleQuiverRep {
    let arrows = (1..dims.len()).map(|i| Arrow::new(i - 1, i, format!("A{i}"))).collect();
    random_rep(rng, double(&Quiver::new(dims.to_vec(), arrows).expect("valid chain")))
}

/// One vertex of dimension `dim` with `loops` loop arrows, doubled.
pub fn loop_rep<R: Rng + ?Sized>(rng: &mut R, dim: usize, loops: usize) -> DoubleQuiverRep {
    let arrows = (1..=loops).map(|i| Arrow::new(0, 0, format!("L{i}"))).collect();
    random_rep(rng, double(&Quiver::new(vec![dim], arrows).expect("valid loop quiver")))
}

pub fn random_rep<R: Rng + ?Sized>(rng: &mut R, dq: DoubleQuiver) -> DoubleQuiverRep {
    let matrices = dq
        .arrows()
        .iter()
        .map(|a| disk_matrix(rng, dq.dims()[a.head], dq.dims()[a.tail]))
        .collect();
    DoubleQuiverRep::new(dq, matrices).expect("shapes follow the quiver")
}

/// One invertible matrix per vertex, each with condition number ≤ `max_cond`.
pub fn vertex_gauge<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], max_cond: f64) -> Vec<CMatrix> {
    dims.iter().map(|&d| invertible(rng, d, max_cond)).collect()
}

/// One matrix per vertex from [`conditioned`], with condition numbers
/// log-uniform in `[1, max_cond]`.
pub fn spread_gauge<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], max_cond: f64) -> Vec<CMatrix> {
    dims.iter()
        .map(|&d| {
            let cond = (max_cond.max(1.0).ln() * rng.gen::<f64>()).exp();
            conditioned(rng, d, cond)
        })
        .collect()
}
