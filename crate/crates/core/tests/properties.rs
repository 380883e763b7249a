use std::collections::BTreeSet;

use modulikit_core::connection::{gauge, involution, is_hermitian, is_pure, ConnectionData, FrameTuple};
use modulikit_core::jordan::{field_bracket, is_tripotent, reconstruct, spectral, triple_product, VectorField};
use modulikit_core::linalg::{commutator, hermitian_eigen, hermitian_sqrt, lie_sharp, sharp, CMatrix, C64};
use modulikit_core::quiver::{
    cycle_scale, cycle_trace, enumerate_cycles, gauge_action, invariants, moment_map, MomentConvention,
};
use modulikit_core::sampling::{
    chain_rep, invertible, loop_rep, pattern_connection, rng_from_seed, spread_gauge, unitary, vertex_gauge,
};
use modulikit_core::weights::{chains, commutant_contains, commutant_dim, decompose, f_of, sample_commutant, WeightData};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| CMatrix::new(rows, cols, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap())
}

fn square() -> impl Strategy<Value = (CMatrix, CMatrix)> {
    (1usize..=6).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))
}

fn five_rectangular() -> impl Strategy<Value = [CMatrix; 5]> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(p, q)| [matrix(p, q), matrix(p, q), matrix(p, q), matrix(p, q), matrix(p, q)])
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1e-14)
}

fn circle(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Nullity of the stacked maps `h ↦ hF − Fh` computed with nalgebra.
fn brute_force_commutant_dim(fs: &[CMatrix]) -> usize {
    let n = fs[0].rows();
    let nn = n * n;
    let mut sys = nalgebra::DMatrix::<C64>::zeros(fs.len() * nn, nn);
    for (s, f) in fs.iter().enumerate() {
        for col in 0..nn {
            let e = CMatrix::unit(n, n, col / n, col % n);
            let img = &(&e * f) - &(f * &e);
            for (row, z) in img.entries().iter().enumerate() {
                sys[(s * nn + row, col)] = *z;
            }
        }
    }
    nn - sys.rank(1e-8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sharp_is_involutive_and_multiplicative(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let (h, k) = (invertible(&mut rng, n, 1e4), invertible(&mut rng, n, 1e4));
        let sh = sharp(&h).unwrap();
        let sk = sharp(&k).unwrap();
        prop_assert!(rel((&sharp(&sh).unwrap() - &h).norm(), h.norm()) <= 1e-10);
        let prod = sharp(&(&h * &k)).unwrap();
        prop_assert!(rel((&prod - &(&sh * &sk)).norm(), sh.norm() * sk.norm()) <= 1e-10);
    }

    #[test]
    fn lie_sharp_involutive_and_bracket_preserving((x, y) in square()) {
        prop_assert_eq!(lie_sharp(&lie_sharp(&x)), x.clone());
        let lhs = lie_sharp(&commutator(&x, &y).unwrap());
        let rhs = commutator(&lie_sharp(&x), &lie_sharp(&y)).unwrap();
        prop_assert!(rel((&lhs - &rhs).norm(), x.norm() * y.norm()) <= 1e-12);
    }

    #[test]
    fn hermitian_sqrt_properties(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let g = invertible(&mut rng, n, 1e3);
        let k = &g * &g.adjoint();
        let h = hermitian_sqrt(&k, 1e-10).unwrap();
        prop_assert_eq!(&h, &h.adjoint());
        prop_assert!(hermitian_eigen(&h).values[0] > 0.0);
        prop_assert!(rel((&(&h * &h.adjoint()) - &k).norm(), k.norm()) <= 1e-10);
    }

    #[test]
    fn decompose_permutation_invariant(ws in prop::collection::vec(-3i64..=3, 1..=8), shift in any::<usize>()) {
        let n = ws.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted: Vec<i64> = perm.iter().map(|&p| ws[p]).collect();
        let d = decompose(&WeightData::rank_one(&ws).unwrap());
        let dp = decompose(&WeightData::rank_one(&permuted).unwrap());
        prop_assert_eq!(d.blocks().len(), dp.blocks().len());
        for (b, bp) in d.blocks().iter().zip(dp.blocks()) {
            prop_assert_eq!(&b.weight, &bp.weight);
            let mapped: BTreeSet<usize> = bp.indices.iter().map(|&i| perm[i]).collect();
            prop_assert_eq!(mapped, b.indices.iter().copied().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn chains_are_lossless(ws in prop::collection::vec(-6i64..=6, 1..=10)) {
        let d = decompose(&WeightData::rank_one(&ws).unwrap());
        let ch = chains(&d).unwrap();
        prop_assert_eq!(ch.dim(), ws.len());
        let mut seen = Vec::new();
        for c in &ch.chains {
            for (level, &b) in c.blocks.iter().enumerate() {
                prop_assert_eq!(d.blocks()[b].weight[0], c.base + level as i64);
                prop_assert_eq!(d.blocks()[b].dim(), c.dims[level]);
                seen.extend(d.blocks()[b].indices.iter().copied());
            }
        }
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..ws.len()).collect::<Vec<_>>());
    }

    #[test]
    fn commutant_samples_commute(
        ws in prop::collection::vec((-2i64..=2, -2i64..=2), 1..=6),
        seed in any::<u64>(),
        theta in (0.0f64..6.3, 0.0f64..6.3),
    ) {
        let w = WeightData::new(2, ws.iter().map(|&(a, b)| vec![a, b]).collect()).unwrap();
        let d = decompose(&w);
        let h = sample_commutant(&d, seed);
        prop_assert!(commutant_contains(&d, &h, 1e-10).unwrap());
        let f = f_of(&d, &[circle(theta.0), circle(theta.1)]).unwrap();
        prop_assert!((&(&f * &h) - &(&h * &f)).norm() <= 1e-10 * h.norm());
    }

    #[test]
    fn commutant_dim_matches_linear_solve(ws in prop::collection::vec(-2i64..=2, 1..=5), seed in any::<u64>()) {
        let d = decompose(&WeightData::rank_one(&ws).unwrap());
        let mut rng = rng_from_seed(seed);
        let u = unitary(&mut rng, ws.len());
        // two irrational angles avoid accidental root-of-unity coincidences
        let fs: Vec<CMatrix> = [1.0f64, 2.0f64.sqrt()]
            .iter()
            .map(|&t| &(&u * &f_of(&d, &[circle(t)]).unwrap()) * &u.adjoint())
            .collect();
        prop_assert_eq!(commutant_dim(&d), brute_force_commutant_dim(&fs));
    }

    #[test]
    fn involution_and_gauge(ws in prop::collection::vec(0i64..=4, 1..=8), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let c = pattern_connection(&mut rng, &ws);
        let h = sample_commutant(c.decomposition(), seed ^ 1);
        let lhs = involution(&gauge(&c, &h, 1e-10).unwrap());
        let rhs = gauge(&involution(&c), &sharp(&h).unwrap(), 1e-10).unwrap();
        let scale = lhs.a().norm().max(lhs.b().norm());
        prop_assert!(rel((lhs.a() - rhs.a()).norm().max((lhs.b() - rhs.b()).norm()), scale) <= 1e-10);
        prop_assert!(involution(&c).forbidden_entries().is_empty());
        prop_assert!(gauge(&c, &h, 1e-10).unwrap().forbidden_entries().is_empty());
        prop_assert_eq!(involution(&involution(&c)), c.clone());
    }

    #[test]
    fn hermitian_iff_fixed(ws in prop::collection::vec(0i64..=3, 1..=6), seed in any::<u64>(), make_fixed: bool) {
        let mut rng = rng_from_seed(seed);
        let mut c = pattern_connection(&mut rng, &ws);
        if make_fixed {
            c = ConnectionData::hermitian(c.decomposition().clone(), c.a().clone()).unwrap();
        }
        let once = involution(&c);
        let fixed = (once.a() - c.a()).norm().max((once.b() - c.b()).norm()) <= 1e-10 * c.a().norm().max(c.b().norm()).max(1e-14);
        prop_assert_eq!(fixed, is_hermitian(&c, 1e-10));
    }

    #[test]
    fn purity_is_gauge_invariant(
        (n, a, b) in (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(matrix(n, n), 1..=3), prop::collection::vec(matrix(n, n), 1..=3))),
        seed in any::<u64>(),
    ) {
        let r = a.len().min(b.len());
        let t = FrameTuple::new(a[..r].to_vec(), b[..r].to_vec(), None).unwrap();
        let h = invertible(&mut rng_from_seed(seed), n, 1e3);
        let before = is_pure(&t, 1e-10).pure;
        prop_assert_eq!(before, is_pure(&t.conjugate(&h).unwrap(), 1e-10).pure);
        if r == 1 {
            prop_assert!(before);
        }
    }

    #[test]
    fn moment_maps(dims in prop::collection::vec(1usize..=3, 1..=6), seed in any::<u64>(), loops in 0usize..=2) {
        let mut rng = rng_from_seed(seed);
        let rep = if loops > 0 { loop_rep(&mut rng, dims[0], loops) } else { chain_rep(&mut rng, &dims) };
        for mu in moment_map(&rep, MomentConvention::Paper) {
            prop_assert!(mu.max_abs() <= 1e-14);
        }
        let g = vertex_gauge(&mut rng, rep.quiver().dims(), 1e3);
        let moved = gauge_action(&rep, &g).unwrap();
        let before = moment_map(&rep, MomentConvention::Standard);
        let after = moment_map(&moved, MomentConvention::Standard);
        for v in 0..g.len() {
            let ginv = g[v].inverse().unwrap();
            let expected = &(&g[v] * &before[v]) * &ginv;
            let scale = g[v].norm() * before[v].norm() * ginv.norm() + after[v].norm();
            prop_assert!(rel((&after[v] - &expected).norm(), scale) <= 1e-10);
        }
    }

    #[test]
    fn traces_gauge_and_rotation_invariant(dims in prop::collection::vec(1usize..=3, 1..=4), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let rep = chain_rep(&mut rng, &dims);
        let g = spread_gauge(&mut rng, &dims, 1e6);
        let moved = gauge_action(&rep, &g).unwrap();
        let (x, y) = (invariants(&rep, 6), invariants(&moved, 6));
        for ((w, t0), (_, t1)) in x.entries.iter().zip(&y.entries) {
            let scale = t0.norm().max(cycle_scale(&rep, w)).max(cycle_scale(&moved, w));
            prop_assert!(rel((t0 - t1).norm(), scale) <= 1e-9);
            for r in 1..w.len() {
                let t = cycle_trace(&rep, &w.rotate(r));
                prop_assert!(rel((t - t0).norm(), cycle_scale(&rep, w)) <= 1e-12);
            }
        }
        prop_assert!(enumerate_cycles(rep.quiver(), 6).iter().all(|w| w.canonical(rep.quiver()) == *w));
    }

    #[test]
    fn tripotents_and_singular_values(seed in any::<u64>(), p in 1usize..=6, q in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let (u, v) = (unitary(&mut rng, p), unitary(&mut rng, q));
        let e = &(&u * &CMatrix::unit(p, q, 0, 0)) * &v.adjoint();
        prop_assert!(is_tripotent(&e, 1e-10));
        let z = modulikit_core::sampling::disk_matrix(&mut rng, p, q);
        let t0 = spectral(&z).t;
        let t1 = spectral(&(&(&u * &z) * &v.adjoint())).t;
        for (a, b) in t0.iter().zip(&t1) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!(rel((&reconstruct(&spectral(&z)) - &z).norm(), z.norm()) <= 1e-10);
    }

    #[test]
    fn jordan_identity_and_quadratic_brackets([u, v, x, y, z] in five_rectangular()) {
        let tp = |a: &CMatrix, b: &CMatrix, c: &CMatrix| triple_product(a, b, c).unwrap();
        let lhs = tp(&u, &v, &tp(&x, &y, &z));
        let rhs = &(&tp(&tp(&u, &v, &x), &y, &z) - &tp(&x, &tp(&v, &u, &y), &z)) + &tp(&x, &y, &tp(&u, &v, &z));
        let scale = u.norm() * v.norm() * x.norm() * y.norm() * z.norm();
        prop_assert!(rel((&lhs - &rhs).norm(), scale) <= 1e-12);
        let br = field_bracket(&VectorField::Quadratic(u.clone()), &VectorField::Quadratic(v.clone()), &z).unwrap();
        prop_assert!(rel(br.norm(), u.norm() * v.norm() * z.norm().powi(3)) <= 1e-12);
    }
}
