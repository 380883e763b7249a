//! Randomized property suite behind `modulikit selftest`.
//!
//! Each property draws its own generator from the run seed, so results do
//! not depend on the order properties run in. A property reports the worst
//! observed defect; it passes when that defect is at most its tolerance.
//! Boolean properties count mismatches against a tolerance of zero.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;
use rand::Rng;

use crate::connection::{
    gauge, involution, is_hermitian, is_pure, validate_covariance, ConnectionData, Family, FrameTuple,
};
use crate::jordan::{field_bracket, is_tripotent, reconstruct, spectral, triple_product, VectorField};
use crate::linalg::{commutator, hermitian_eigen, hermitian_sqrt, is_unitary, lie_sharp, sharp, svd, CMatrix, C64};
use crate::quiver::{
    cycle_scale, cycle_trace, double, enumerate_cycles, gauge_action, invariants, moment_map, Arrow, CycleWord,
    DoubleQuiver, DoubleQuiverRep, MomentConvention, Quiver,
};
use crate::sampling::{
    chain_rep, disk, disk_matrix, invertible, loop_rep, pattern_connection, rank_one_weights, rng_from_seed,
    spread_gauge, unit_circle, unitary, vertex_gauge, SampleRng,
};
use crate::weights::{chains, commutant_dim, decompose, f_of, sample_commutant, WeightData};
use crate::{scale_of, NORM_FLOOR};

/// Deliberate defects for mutation-testing the suite itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replace `(A, B) ↦ (−B†, −A†)` by `(A, B) ↦ (−B†, A†)`.
    InvolutionSign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random samples per property.
    pub samples: usize,
    /// Largest matrix dimension drawn.
    pub max_dim: usize,
    pub fault: Option<Fault>,
}

impl SelftestConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, samples: 200, max_dim: 8, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub module: &'static str,
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub tol: f64,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed())
    }
}

/// Returns `(samples actually drawn, worst defect)`.
type Check = fn(&mut SampleRng, &SelftestConfig) -> (usize, f64);

struct Property {
    module: &'static str,
    name: &'static str,
    tol: f64,
    check: Check,
}

const PROPERTIES: &[Property] = &[
    Property { module: "linalg", name: "sharp_involutive", tol: 1e-10, check: sharp_involutive },
    Property { module: "linalg", name: "sharp_multiplicative", tol: 1e-10, check: sharp_multiplicative },
    Property { module: "linalg", name: "lie_sharp_involutive", tol: 0.0, check: lie_sharp_involutive },
    Property { module: "linalg", name: "lie_sharp_preserves_bracket", tol: 1e-12, check: lie_sharp_bracket },
    Property { module: "linalg", name: "hermitian_sqrt_factorizes", tol: 1e-10, check: hermitian_sqrt_factorizes },
    Property { module: "linalg", name: "unitary_iff_sharp_fixed", tol: 0.0, check: unitary_iff_sharp_fixed },
    Property { module: "weights", name: "decompose_permutation_invariant", tol: 0.0, check: decompose_permutation },
    Property { module: "weights", name: "chains_lossless", tol: 0.0, check: chains_lossless },
    Property { module: "weights", name: "commutant_commutes_with_torus", tol: 1e-10, check: commutant_commutes },
    Property { module: "weights", name: "commutant_dim_brute_force", tol: 0.0, check: commutant_dim_brute_force },
    Property { module: "connection", name: "covariance_structure", tol: 0.0, check: covariance_structure },
    Property { module: "connection", name: "involution_order_two", tol: 1e-14, check: involution_order_two },
    Property { module: "connection", name: "involution_gauge_covariance", tol: 1e-10, check: involution_gauge },
    Property { module: "connection", name: "weight_pattern_preserved", tol: 0.0, check: pattern_preserved },
    Property { module: "connection", name: "purity_gauge_invariant", tol: 0.0, check: purity_gauge_invariant },
    Property { module: "connection", name: "rank_one_always_pure", tol: 0.0, check: rank_one_pure },
    Property { module: "connection", name: "hermitian_iff_fixed", tol: 0.0, check: hermitian_iff_fixed },
    Property { module: "quiver", name: "all_arrow_moment_map_vanishes", tol: 1e-14, check: all_arrow_moment_vanishes },
    Property { module: "quiver", name: "standard_moment_map_equivariant", tol: 1e-10, check: standard_moment },
    Property { module: "quiver", name: "invariants_gauge_invariant", tol: 1e-9, check: invariants_gauge },
    Property { module: "quiver", name: "trace_rotation_invariant", tol: 1e-12, check: trace_rotation },
    Property { module: "quiver", name: "enumerate_cycles_brute_force", tol: 0.0, check: enumerate_brute_force },
    Property { module: "jordan", name: "tripotent_unitary_orbit", tol: 1e-10, check: tripotent_orbit },
    Property { module: "jordan", name: "singular_values_unitary_invariant", tol: 1e-10, check: singular_invariance },
    Property { module: "jordan", name: "jordan_triple_identity", tol: 1e-12, check: jordan_identity },
    Property { module: "jordan", name: "quadratic_fields_commute", tol: 1e-12, check: quadratic_commute },
    Property { module: "jordan", name: "spectral_round_trip", tol: 1e-10, check: spectral_round_trip },
];

/// Runs every property; deterministic in `cfg`.
pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let properties = PROPERTIES
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let stream = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(idx as u64);
            let mut rng = rng_from_seed(stream);
            let (samples, worst) = (p.check)(&mut rng, cfg);
            let worst = if worst.is_nan() { f64::INFINITY } else { worst };
            PropertyResult { module: p.module, name: p.name, samples, worst, tol: p.tol }
        })
        .collect();
    SelftestReport { seed: cfg.seed, properties }
}

pub fn property_names() -> impl Iterator<Item = &'static str> {
    PROPERTIES.iter().map(|p| p.name)
}

fn dim(rng: &mut SampleRng, cfg: &SelftestConfig, lo: usize) -> usize {
    rng.gen_range(lo..=cfg.max_dim.max(lo))
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale_of(scale)
}

fn sharp_involutive(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let h = invertible(rng, n, 1e3);
        let back = sharp(&sharp(&h).expect("invertible")).expect("invertible");
        worst = worst.max(rel((&back - &h).norm(), h.norm()));
    }
    (cfg.samples, worst)
}

fn sharp_multiplicative(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let (h1, h2) = (invertible(rng, n, 1e3), invertible(rng, n, 1e3));
        let (s1, s2) = (sharp(&h1).expect("invertible"), sharp(&h2).expect("invertible"));
        let lhs = sharp(&(&h1 * &h2)).expect("invertible");
        worst = worst.max(rel((&lhs - &(&s1 * &s2)).norm(), s1.norm() * s2.norm()));
    }
    (cfg.samples, worst)
}

fn lie_sharp_involutive(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let x = disk_matrix(rng, n, n);
        worst = worst.max((&lie_sharp(&lie_sharp(&x)) - &x).norm());
    }
    (cfg.samples, worst)
}

fn lie_sharp_bracket(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let (x, y) = (disk_matrix(rng, n, n), disk_matrix(rng, n, n));
        let lhs = lie_sharp(&commutator(&x, &y).expect("square"));
        let rhs = commutator(&lie_sharp(&x), &lie_sharp(&y)).expect("square");
        worst = worst.max(rel((&lhs - &rhs).norm(), x.norm() * y.norm()));
    }
    (cfg.samples, worst)
}

fn hermitian_sqrt_factorizes(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let g = invertible(rng, n, 1e3);
        let k = &g * &g.adjoint();
        let Ok(h) = hermitian_sqrt(&k, 1e-10) else {
            return (cfg.samples, f64::INFINITY);
        };
        let hermitian_defect = (&h - &h.adjoint()).norm();
        let positive = hermitian_eigen(&h).values[0] > 0.0;
        if !positive {
            return (cfg.samples, f64::INFINITY);
        }
        let err = rel((&(&h * &h.adjoint()) - &k).norm(), k.norm());
        worst = worst.max(err).max(hermitian_defect);
    }
    (cfg.samples, worst)
}

fn unitary_iff_sharp_fixed(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut mismatches = 0.0;
    for s in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let h = if s % 2 == 0 { unitary(rng, n) } else { invertible(rng, n, 1e3) };
        let fixed = (&sharp(&h).expect("invertible") - &h).norm() <= 1e-10 * h.norm();
        if fixed != is_unitary(&h, 1e-10) {
            mismatches += 1.0;
        }
    }
    (cfg.samples, mismatches)
}

fn random_weight_data(rng: &mut SampleRng, n: usize, rank: usize, range: i64) -> WeightData {
    let weights = (0..n).map(|_| (0..rank).map(|_| rng.gen_range(-range..=range)).collect()).collect();
    WeightData::new(rank, weights).expect("valid weights")
}

fn shuffle(rng: &mut SampleRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

fn decompose_permutation(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut mismatches = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let rank = rng.gen_range(1..=2);
        let w = random_weight_data(rng, n, rank, 3);
        let perm = shuffle(rng, n);
        let permuted: Vec<Vec<i64>> = (0..n).map(|i| w.weights()[perm[i]].clone()).collect();
        let d = decompose(&w);
        let dp = decompose(&WeightData::new(rank, permuted).expect("valid"));
        let same = d.blocks().len() == dp.blocks().len()
            && d.blocks().iter().zip(dp.blocks()).all(|(b, bp)| {
                let relabeled: BTreeSet<usize> = bp.indices.iter().map(|&i| perm[i]).collect();
                b.weight == bp.weight && relabeled == b.indices.iter().copied().collect()
            });
        if !same {
            mismatches += 1.0;
        }
    }
    (cfg.samples, mismatches)
}

fn chains_lossless(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut bad = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let ws = rank_one_weights(rng, n, -5, 5);
        let d = decompose(&WeightData::rank_one(&ws).expect("valid"));
        let ch = chains(&d).expect("rank one");
        let mut ok = ch.dim() == n;
        let flat: Vec<usize> = ch.chains.iter().flat_map(|c| c.blocks.iter().copied()).collect();
        ok &= flat == (0..d.blocks().len()).collect::<Vec<_>>();
        for c in &ch.chains {
            for (level, &b) in c.blocks.iter().enumerate() {
                ok &= d.blocks()[b].weight[0] == c.base + level as i64;
                ok &= d.blocks()[b].dim() == c.dims[level];
            }
        }
        for pair in ch.chains.windows(2) {
            ok &= pair[1].base - (pair[0].base + pair[0].len() as i64 - 1) >= 2;
        }
        if !ok {
            bad += 1.0;
        }
    }
    (cfg.samples, bad)
}

fn commutant_commutes(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let rank = rng.gen_range(1..=2);
        let d = decompose(&random_weight_data(rng, n, rank, 2));
        let h = sample_commutant(&d, rng.gen());
        let tau: Vec<C64> = (0..rank).map(|_| unit_circle(rng)).collect();
        let f = f_of(&d, &tau).expect("unit modulus");
        worst = worst.max(rel((&(&f * &h) - &(&h * &f)).norm(), h.norm()));
    }
    (cfg.samples, worst)
}

/// Nullity of `h ↦ [h, F]` stacked over two generic torus points, with `F`
/// written in a random unitary basis so the system is dense.
fn commutant_dim_brute_force(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut mismatches = 0.0;
    for _ in 0..cfg.samples {
        let n = rng.gen_range(1..=5.min(cfg.max_dim).max(1));
        let rank = rng.gen_range(1..=2);
        let d = decompose(&random_weight_data(rng, n, rank, 2));
        let u = unitary(rng, n);
        let nn = n * n;
        let mut system = CMatrix::zeros(2 * nn, nn);
        for s in 0..2 {
            let tau: Vec<C64> = (0..rank).map(|_| unit_circle(rng)).collect();
            let f = &(&u * &f_of(&d, &tau).expect("unit modulus")) * &u.adjoint();
            for col in 0..nn {
                let e = CMatrix::unit(n, n, col / n, col % n);
                let image = &(&e * &f) - &(&f * &e);
                for (row, z) in image.entries().iter().enumerate() {
                    system[(s * nn + row, col)] = *z;
                }
            }
        }
        let sv = svd(&system).values;
        let top = sv.first().copied().unwrap_or(0.0);
        let rank_l = sv.iter().filter(|&&s| s > 1e-8 * top.max(1.0)).count();
        if nn - rank_l != commutant_dim(&d) {
            mismatches += 1.0;
        }
    }
    (cfg.samples, mismatches)
}

fn random_connection(rng: &mut SampleRng, cfg: &SelftestConfig) -> ConnectionData {
    let n = dim(rng, cfg, 1);
    let ws = rank_one_weights(rng, n, 0, 4);
    pattern_connection(rng, &ws)
}

fn covariance_structure(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut wrong = 0.0;
    for _ in 0..cfg.samples {
        let c = random_connection(rng, cfg);
        if !validate_covariance(&c, 32, 1e-10).expect("shapes").passed() {
            wrong += 1.0;
        }
        let n = c.dim();
        let family = if rng.gen() { Family::Alpha } else { Family::Beta };
        let forbidden: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !c.allowed(family, i, j))
            .collect();
        let (i, j) = forbidden[rng.gen_range(0..forbidden.len())];
        let (mut a, mut b) = (c.a().clone(), c.b().clone());
        let target = if family == Family::Alpha { &mut a } else { &mut b };
        target[(i, j)] += disk(rng) * 0.5 + C64::new(0.5, 0.0);
        let bad = ConnectionData::new(c.decomposition().clone(), a, b).expect("shapes");
        if validate_covariance(&bad, 32, 1e-10).expect("shapes").passed() {
            wrong += 1.0;
        }
    }
    (cfg.samples, wrong)
}

fn apply_involution(c: &ConnectionData, fault: Option<Fault>) -> ConnectionData {
    match fault {
        None => involution(c),
        Some(Fault::InvolutionSign) => {
            ConnectionData::new(c.decomposition().clone(), lie_sharp(c.b()), c.a().adjoint()).expect("shapes")
        }
    }
}

fn connection_distance(x: &ConnectionData, y: &ConnectionData) -> f64 {
    (&x.a().clone() - y.a()).norm().hypot((&x.b().clone() - y.b()).norm())
}

fn connection_norm(c: &ConnectionData) -> f64 {
    c.a().norm().hypot(c.b().norm())
}

fn involution_order_two(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let c = random_connection(rng, cfg);
        let twice = apply_involution(&apply_involution(&c, cfg.fault), cfg.fault);
        worst = worst.max(rel(connection_distance(&twice, &c), connection_norm(&c)));
    }
    (cfg.samples, worst)
}

fn involution_gauge(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let c = random_connection(rng, cfg);
        let h = sample_commutant(c.decomposition(), rng.gen());
        let lhs = involution(&gauge(&c, &h, 1e-10).expect("commutant"));
        let rhs = gauge(&involution(&c), &sharp(&h).expect("invertible"), 1e-10).expect("commutant");
        worst = worst.max(rel(connection_distance(&lhs, &rhs), connection_norm(&lhs)));
    }
    (cfg.samples, worst)
}

fn pattern_preserved(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut bad = 0.0;
    for _ in 0..cfg.samples {
        let c = random_connection(rng, cfg);
        let h = sample_commutant(c.decomposition(), rng.gen());
        let g = gauge(&c, &h, 1e-10).expect("commutant");
        if !involution(&c).forbidden_entries().is_empty() || !g.forbidden_entries().is_empty() {
            bad += 1.0;
        }
    }
    (cfg.samples, bad)
}

/// Commuting tuples are polynomials in one matrix; the rest are generic.
fn random_frame(rng: &mut SampleRng, n: usize, r: usize, commuting: bool) -> FrameTuple {
    let family = |rng: &mut SampleRng| -> Vec<CMatrix> {
        if commuting {
            let m = disk_matrix(rng, n, n);
            let m2 = &m * &m;
            (0..r)
                .map(|_| {
                    let (c0, c1, c2) = (disk(rng), disk(rng), disk(rng));
                    &(&CMatrix::identity(n).scale(c0) + &m.scale(c1)) + &m2.scale(c2)
                })
                .collect()
        } else {
            (0..r).map(|_| disk_matrix(rng, n, n)).collect()
        }
    };
    let a = family(rng);
    let b = family(rng);
    FrameTuple::new(a, b, None).expect("uniform shapes")
}

fn purity_gauge_invariant(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut mismatches = 0.0;
    for s in 0..cfg.samples {
        let n = dim(rng, cfg, 2);
        let r = rng.gen_range(1..=3);
        let t = random_frame(rng, n, r, s % 2 == 0);
        let h = invertible(rng, n, 1e3);
        let before = is_pure(&t, 1e-10).pure;
        let after = is_pure(&t.conjugate(&h).expect("invertible"), 1e-10).pure;
        if before != after || before != (s % 2 == 0 || r == 1) {
            mismatches += 1.0;
        }
    }
    (cfg.samples, mismatches)
}

fn rank_one_pure(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut impure = 0.0;
    for _ in 0..cfg.samples {
        let n = dim(rng, cfg, 1);
        let t = FrameTuple::new(vec![disk_matrix(rng, n, n)], vec![disk_matrix(rng, n, n)], None).expect("shapes");
        if !is_pure(&t, 1e-10).pure {
            impure += 1.0;
        }
    }
    (cfg.samples, impure)
}

fn hermitian_iff_fixed(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut mismatches = 0.0;
    for s in 0..cfg.samples {
        let c = random_connection(rng, cfg);
        let c = if s % 4 == 0 {
            ConnectionData::hermitian(c.decomposition().clone(), c.a().clone()).expect("shapes")
        } else {
            c
        };
        let fixed = connection_distance(&involution(&c), &c) <= 1e-10 * scale_of(connection_norm(&c));
        if fixed != is_hermitian(&c, 1e-10) {
            mismatches += 1.0;
        }
    }
    (cfg.samples, mismatches)
}

fn random_quiver_rep(rng: &mut SampleRng, s: usize) -> DoubleQuiverRep {
    if s % 4 == 3 {
        let d = rng.gen_range(1..=4);
        let loops = rng.gen_range(1..=2);
        loop_rep(rng, d, loops)
    } else {
        let k = rng.gen_range(1..=6);
        let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        chain_rep(rng, &dims)
    }
}

fn all_arrow_moment_vanishes(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for s in 0..cfg.samples {
        let rep = random_quiver_rep(rng, s);
        for mu in moment_map(&rep, MomentConvention::Paper) {
            worst = worst.max(mu.max_abs());
        }
    }
    (cfg.samples, worst)
}

/// Sum over the arrows meeting vertex `v` of `‖x_a‖·‖x_ā‖`.
fn moment_scale(rep: &DoubleQuiverRep, v: usize) -> f64 {
    let dq = rep.quiver();
    (0..dq.original_count())
        .filter(|&a| dq.arrows()[a].head == v || dq.arrows()[a].tail == v)
        .map(|a| rep.matrices()[a].norm() * rep.matrices()[dq.opposite(a)].norm())
        .sum()
}

fn standard_moment(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for s in 0..cfg.samples {
        let rep = random_quiver_rep(rng, s);
        let g = vertex_gauge(rng, rep.quiver().dims(), 1e3);
        let moved = gauge_action(&rep, &g).expect("invertible");
        let before = moment_map(&rep, MomentConvention::Standard);
        let after = moment_map(&moved, MomentConvention::Standard);
        for v in 0..g.len() {
            let expected = &(&g[v] * &before[v]) * &g[v].inverse().expect("invertible");
            let scale = moment_scale(&moved, v).max(expected.norm());
            worst = worst.max(rel((&after[v] - &expected).norm(), scale));
        }
    }
    (cfg.samples, worst)
}

fn invariants_gauge(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for s in 0..cfg.samples {
        let rep = random_quiver_rep(rng, s);
        let g = spread_gauge(rng, rep.quiver().dims(), 1e6);
        let moved = gauge_action(&rep, &g).expect("invertible");
        let before = invariants(&rep, 6);
        let after = invariants(&moved, 6);
        for ((w, t0), (_, t1)) in before.entries.iter().zip(&after.entries) {
            let scale = t0.norm().max(cycle_scale(&rep, w)).max(cycle_scale(&moved, w));
            worst = worst.max(rel((t0 - t1).norm(), scale));
        }
    }
    (cfg.samples, worst)
}

fn trace_rotation(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for s in 0..cfg.samples {
        let rep = random_quiver_rep(rng, s);
        for w in enumerate_cycles(rep.quiver(), 6) {
            let t0 = cycle_trace(&rep, &w);
            let scale = cycle_scale(&rep, &w);
            for r in 1..w.len() {
                let t = cycle_trace(&rep, &w.rotate(r));
                worst = worst.max(rel((t - t0).norm(), scale));
            }
        }
    }
    (cfg.samples, worst)
}

/// Every arrow sequence of length `1..=max_len`, kept when it is a closed
/// path, reduced to its least rotation.
fn brute_force_cycles(dq: &DoubleQuiver, max_len: usize) -> BTreeSet<Vec<usize>> {
    let m = dq.arrows().len();
    let mut out = BTreeSet::new();
    if m == 0 {
        return out;
    }
    for len in 1..=max_len {
        let mut seq = vec![0usize; len];
        loop {
            let w = CycleWord(seq.clone());
            if w.is_closed_path(dq) {
                out.insert(w.canonical(dq).0);
            }
            // odometer increment
            let mut pos = 0;
            while pos < len {
                seq[pos] += 1;
                if seq[pos] < m {
                    break;
                }
                seq[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    out
}

fn enumerate_brute_force(_rng: &mut SampleRng, _cfg: &SelftestConfig) -> (usize, f64) {
    let mut cases = Vec::new();
    for k in 1..=4 {
        let arrows = (1..k).map(|i| Arrow::new(i - 1, i, alloc::format!("A{i}"))).collect();
        cases.push(double(&Quiver::new(vec![1; k], arrows).expect("valid")));
    }
    for loops in 1..=2 {
        let arrows = (1..=loops).map(|i| Arrow::new(0, 0, alloc::format!("L{i}"))).collect();
        cases.push(double(&Quiver::new(vec![1], arrows).expect("valid")));
    }
    let mut checked = 0;
    let mut mismatches = 0.0;
    for dq in &cases {
        let cap = if dq.dims().len() == 1 && !dq.arrows().is_empty() { 4 } else { 6 };
        for max_len in 1..=cap {
            checked += 1;
            let fast: BTreeSet<Vec<usize>> = enumerate_cycles(dq, max_len).into_iter().map(|w| w.0).collect();
            if fast != brute_force_cycles(dq, max_len) {
                mismatches += 1.0;
            }
        }
    }
    (checked, mismatches)
}

fn tripotent_orbit(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (p, q) = (dim(rng, cfg, 1), dim(rng, cfg, 1));
        let (u, v) = (unitary(rng, p), unitary(rng, q));
        let e = &(&u * &CMatrix::unit(p, q, 0, 0)) * &v.adjoint();
        let eee = triple_product(&e, &e, &e).expect("shapes");
        let defect = rel((&eee - &e).norm(), e.norm());
        worst = worst.max(if is_tripotent(&e, 1e-10) { defect } else { f64::INFINITY });
    }
    (cfg.samples, worst)
}

fn singular_invariance(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (p, q) = (dim(rng, cfg, 1), dim(rng, cfg, 1));
        let z = disk_matrix(rng, p, q);
        let (u, v) = (unitary(rng, p), unitary(rng, q));
        let t0 = spectral(&z).t;
        let t1 = spectral(&(&(&u * &z) * &v.adjoint())).t;
        for (a, b) in t0.iter().zip(&t1) {
            worst = worst.max((a - b).abs());
        }
    }
    (cfg.samples, worst)
}

fn jordan_identity(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let tp = |a: &CMatrix, b: &CMatrix, c: &CMatrix| triple_product(a, b, c).expect("shapes");
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (p, q) = (dim(rng, cfg, 1), dim(rng, cfg, 1));
        let [u, v, x, y, z] = core::array::from_fn(|_| disk_matrix(rng, p, q));
        let lhs = tp(&u, &v, &tp(&x, &y, &z));
        let rhs = &(&tp(&tp(&u, &v, &x), &y, &z) - &tp(&x, &tp(&v, &u, &y), &z)) + &tp(&x, &y, &tp(&u, &v, &z));
        let scale = u.norm() * v.norm() * x.norm() * y.norm() * z.norm();
        worst = worst.max(rel((&lhs - &rhs).norm(), scale));
    }
    (cfg.samples, worst)
}

/// Random matrix with Frobenius norm uniform in `(0, 1]`.
fn in_unit_ball(rng: &mut SampleRng, p: usize, q: usize) -> CMatrix {
    let m = disk_matrix(rng, p, q);
    let target = 1.0 - rng.gen::<f64>();
    m.scale_real(target / scale_of(m.norm()))
}

fn quadratic_commute(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (p, q) = (dim(rng, cfg, 1), dim(rng, cfg, 1));
        let (u, v, z) = (in_unit_ball(rng, p, q), in_unit_ball(rng, p, q), in_unit_ball(rng, p, q));
        let br = field_bracket(&VectorField::Quadratic(u.clone()), &VectorField::Quadratic(v.clone()), &z)
            .expect("shapes");
        let scale = u.norm() * v.norm() * z.norm().powi(3);
        worst = worst.max(rel(br.norm(), scale.max(NORM_FLOOR)));
    }
    (cfg.samples, worst)
}

fn spectral_round_trip(rng: &mut SampleRng, cfg: &SelftestConfig) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let (p, q) = (dim(rng, cfg, 1), dim(rng, cfg, 1));
        let z = disk_matrix(rng, p, q);
        let sd = spectral(&z);
        let err = rel((&reconstruct(&sd) - &z).norm(), z.norm());
        let ud = (&(&sd.u.adjoint() * &sd.u) - &CMatrix::identity(p)).norm();
        let vd = (&(&sd.v.adjoint() * &sd.v) - &CMatrix::identity(q)).norm();
        let sorted = sd.t.windows(2).all(|w| w[0] <= w[1]);
        worst = worst.max(err).max(ud).max(vd);
        if !sorted {
            worst = f64::INFINITY;
        }
    }
    (cfg.samples, worst)
}
