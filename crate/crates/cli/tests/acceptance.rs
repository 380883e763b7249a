//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use modulikit_core::connection::{
    involution, is_hermitian, is_pure, validate_covariance, ConnectionData, Family, FrameTuple,
};
use modulikit_core::jordan::{field_bracket, reconstruct, spectral, triple_product, VectorField};
use modulikit_core::linalg::{commutator, lie_sharp, sharp, CMatrix, C64};
use modulikit_core::quiver::{
    cycle_scale, double, enumerate_cycles, equivalence_certificate, gauge_action, invariants, moment_map, Arrow,
    Certificate, DoubleQuiver, DoubleQuiverRep, MomentConvention, Quiver,
};
use modulikit_core::sampling::{
    chain_rep, disk, disk_matrix, invertible, loop_rep, pattern_connection, rank_one_weights, rng_from_seed,
    spread_gauge, vertex_gauge, SampleRng,
};
use rand::Rng;

struct Check {
    ok: bool,
    detail: String,
}

fn criterion(n: u32, title: &str, limit_s: u64, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let check = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(limit_s);
    let ok = check.ok && in_time;
    println!(
        "criterion {n} {}: {title}: {}; {:.2}s (limit {limit_s}s)",
        if ok { "PASS" } else { "FAIL" },
        check.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1e-14)
}

fn involution_algebra() -> Check {
    let mut rng = rng_from_seed(101);
    let (mut inv, mut mult, mut bracket) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = rng.gen_range(2..=6);
        let (h, k) = (invertible(&mut rng, n, 1e4), invertible(&mut rng, n, 1e4));
        let sh = sharp(&h).unwrap();
        let sk = sharp(&k).unwrap();
        inv = inv.max(rel((&sharp(&sh).unwrap() - &h).norm(), h.norm()));
        let prod = sharp(&(&h * &k)).unwrap();
        mult = mult.max(rel((&prod - &(&sh * &sk)).norm(), sh.norm() * sk.norm()));

        let (x, y) = (disk_matrix(&mut rng, n, n), disk_matrix(&mut rng, n, n));
        let lhs = lie_sharp(&commutator(&x, &y).unwrap());
        let rhs = commutator(&lie_sharp(&x), &lie_sharp(&y)).unwrap();
        bracket = bracket.max(rel((&lhs - &rhs).norm(), x.norm() * y.norm()));
    }
    Check {
        ok: inv <= 1e-10 && mult <= 1e-10 && bracket <= 1e-12,
        detail: format!("sharp∘sharp {inv:.1e}, multiplicativity {mult:.1e}, bracket {bracket:.1e}"),
    }
}

/// Family members that commute are polynomials in one random matrix.
fn commuting_family(rng: &mut SampleRng, n: usize, r: usize) -> Vec<CMatrix> {
    let m = disk_matrix(rng, n, n);
    (0..r)
        .map(|_| &CMatrix::identity(n).scale(disk(rng)) + &(&m.scale(disk(rng)) + &(&m * &m).scale(disk(rng))))
        .collect()
}

fn naive_commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let n = x.rows();
    CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| x[(i, k)] * y[(k, j)] - y[(i, k)] * x[(k, j)]).sum())
}

/// First non-commuting pair by exhaustive scan, α before β, `i < j`.
fn scan_pairs(t: &FrameTuple, tol: f64) -> Option<(Family, usize, usize)> {
    for family in [Family::Alpha, Family::Beta] {
        let ms = t.family(family);
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                let c = naive_commutator(&ms[i], &ms[j]).norm();
                if c > tol * (ms[i].norm() * ms[j].norm() + 1e-12) {
                    return Some((family, i, j));
                }
            }
        }
    }
    None
}

fn rank_one_purity() -> Check {
    let mut rng = rng_from_seed(202);
    let mut impure_rank_one = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let t = FrameTuple::new(vec![disk_matrix(&mut rng, n, n)], vec![disk_matrix(&mut rng, n, n)], None).unwrap();
        if !is_pure(&t, 1e-10).pure {
            impure_rank_one += 1;
        }
    }
    let mut wrong_witness = 0;
    for s in 0..50 {
        let n = rng.gen_range(2..=6);
        let generic: Vec<CMatrix> = (0..2).map(|_| disk_matrix(&mut rng, n, n)).collect();
        let tame = commuting_family(&mut rng, n, 2);
        let (a, b) = if s % 2 == 0 { (generic, tame) } else { (tame, generic) };
        let t = FrameTuple::new(a, b, None).unwrap();
        let report = is_pure(&t, 1e-10);
        let expected = scan_pairs(&t, 1e-10);
        let got = report.witness.as_ref().map(|w| (w.family, w.i, w.j));
        if report.pure || expected.is_none() || got != expected {
            wrong_witness += 1;
        }
    }
    Check {
        ok: impure_rank_one == 0 && wrong_witness == 0,
        detail: format!("rank-1 reported impure {impure_rank_one}/200, rank-2 wrong verdict or witness {wrong_witness}/50"),
    }
}

fn covariance_structure() -> Check {
    let mut rng = rng_from_seed(303);
    let (mut clean_failed, mut injected_passed) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let ws = rank_one_weights(&mut rng, n, -3, 3);
        let c = pattern_connection(&mut rng, &ws);
        let r = validate_covariance(&c, 32, 1e-10).unwrap();
        if !(r.structural_ok() && r.sampled_ok()) {
            clean_failed += 1;
        }
        let family = if rng.gen() { Family::Alpha } else { Family::Beta };
        let forbidden: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !c.allowed(family, i, j)).collect();
        let (i, j) = forbidden[rng.gen_range(0..forbidden.len())];
        let (mut a, mut b) = (c.a().clone(), c.b().clone());
        let m = if family == Family::Alpha { &mut a } else { &mut b };
        m[(i, j)] = C64::from_polar(1.0, rng.gen::<f64>() * 6.0);
        let bad = ConnectionData::new(c.decomposition().clone(), a, b).unwrap();
        let r = validate_covariance(&bad, 32, 1e-10).unwrap();
        if r.structural_ok() || r.sampled_ok() {
            injected_passed += 1;
        }
    }
    Check {
        ok: clean_failed == 0 && injected_passed == 0,
        detail: format!("pattern rejected {clean_failed}/100, injected entry missed {injected_passed}/100"),
    }
}

fn involution_fixed_points() -> Check {
    let mut rng = rng_from_seed(404);
    let (mut not_exact, mut worst, mut mismatches, mut fixed_seen) = (0, 0.0f64, 0, 0);
    for s in 0..200 {
        // resample until some entry is allowed: A = B = 0 is a genuine fixed point
        let mut c = loop {
            let n = rng.gen_range(2..=8);
            let ws = rank_one_weights(&mut rng, n, 0, 4);
            let c = pattern_connection(&mut rng, &ws);
            if !c.a().is_zero() {
                break c;
            }
        };
        if s % 4 == 0 {
            c = ConnectionData::hermitian(c.decomposition().clone(), c.a().clone()).unwrap();
        }
        let twice = involution(&involution(&c));
        if twice != c || !twice.forbidden_entries().is_empty() {
            not_exact += 1;
        }
        let d = (twice.a() - c.a()).norm().max((twice.b() - c.b()).norm());
        worst = worst.max(rel(d, c.a().norm().max(c.b().norm())));

        let once = involution(&c);
        let fixed = (once.a() - c.a()).norm().max((once.b() - c.b()).norm())
            <= 1e-10 * c.a().norm().max(c.b().norm()).max(1e-14);
        fixed_seen += usize::from(fixed);
        if fixed != is_hermitian(&c, 1e-10) || fixed != (s % 4 == 0) {
            mismatches += 1;
        }
    }
    Check {
        ok: not_exact == 0 && worst <= 1e-14 && mismatches == 0 && fixed_seen == 50,
        detail: format!(
            "inexact double involution {not_exact}/200 (worst {worst:.1e}), hermitian ⟺ fixed mismatches {mismatches}/200, fixed points {fixed_seen}"
        ),
    }
}

fn random_rep(rng: &mut SampleRng, s: usize, max_vertices: usize) -> DoubleQuiverRep {
    if s % 5 == 4 {
        let d = rng.gen_range(1..=4);
        loop_rep(rng, d, 1)
    } else {
        let k = if s < max_vertices { s + 1 } else { rng.gen_range(1..=max_vertices) };
        let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        chain_rep(rng, &dims)
    }
}

fn moment_maps() -> Check {
    let mut rng = rng_from_seed(505);
    let (mut all_arrow, mut equiv) = (0.0f64, 0.0f64);
    let mut loops = 0;
    for s in 0..200 {
        let rep = random_rep(&mut rng, s, 6);
        loops += usize::from(rep.quiver().dims().len() == 1 && !rep.quiver().arrows().is_empty());
        for mu in moment_map(&rep, MomentConvention::Paper) {
            all_arrow = all_arrow.max(mu.max_abs());
        }
        let g = vertex_gauge(&mut rng, rep.quiver().dims(), 1e3);
        let moved = gauge_action(&rep, &g).unwrap();
        let before = moment_map(&rep, MomentConvention::Standard);
        let after = moment_map(&moved, MomentConvention::Standard);
        for v in 0..g.len() {
            let ginv = g[v].inverse().unwrap();
            let expected = &(&g[v] * &before[v]) * &ginv;
            let scale = g[v].norm() * before[v].norm() * ginv.norm() + after[v].norm();
            equiv = equiv.max(rel((&after[v] - &expected).norm(), scale));
        }
    }
    Check {
        ok: all_arrow <= 1e-14 && equiv <= 1e-10 && loops > 0,
        detail: format!("all-arrow μ max entry {all_arrow:.1e}, standard μ equivariance {equiv:.1e}, loop quivers {loops}"),
    }
}

fn scalar_rep(a: f64, b: f64) -> DoubleQuiverRep {
    let dq = double(&Quiver::new(vec![1, 1], vec![Arrow::new(0, 1, "A1")]).unwrap());
    let m = |x: f64| CMatrix::diag(&[C64::new(x, 0.0)]);
    DoubleQuiverRep::new(dq, vec![m(a), m(b)]).unwrap()
}

fn trace_invariants() -> Check {
    let mut rng = rng_from_seed(606);
    let mut worst = 0.0f64;
    for s in 0..200 {
        let rep = random_rep(&mut rng, s, 4);
        let g = spread_gauge(&mut rng, rep.quiver().dims(), 1e6);
        let moved = gauge_action(&rep, &g).unwrap();
        let (x, y) = (invariants(&rep, 8), invariants(&moved, 8));
        for ((w, t0), (_, t1)) in x.entries.iter().zip(&y.entries) {
            let scale = t0.norm().max(cycle_scale(&rep, w)).max(cycle_scale(&moved, w));
            worst = worst.max(rel((t0 - t1).norm(), scale));
        }
    }
    let cert = |a: (f64, f64), b: (f64, f64)| {
        equivalence_certificate(&scalar_rep(a.0, a.1), &scalar_rep(b.0, b.1), 8, 1e-10).unwrap()
    };
    let distinct = matches!(
        cert((1.0, 1.0), (2.0, 1.0)),
        Certificate::Distinct { first, second, .. } if first == C64::new(1.0, 0.0) && second == C64::new(2.0, 0.0)
    );
    let same_orbit = matches!(cert((2.0, 3.0), (3.0, 2.0)), Certificate::Indistinguishable { .. });
    let nilpotent = matches!(cert((1.0, 0.0), (0.0, 1.0)), Certificate::Indistinguishable { .. });
    Check {
        ok: worst <= 1e-9 && distinct && same_orbit && nilpotent,
        detail: format!(
            "gauge invariance {worst:.1e}, (1,1)/(2,1) distinct {distinct}, (2,3)/(3,2) indistinguishable {same_orbit}, (1,0)/(0,1) indistinguishable {nilpotent}"
        ),
    }
}

fn in_unit_ball(rng: &mut SampleRng, p: usize, q: usize) -> CMatrix {
    let m = disk_matrix(rng, p, q);
    let r = 1.0 - rng.gen::<f64>();
    m.scale_real(r / m.norm().max(1e-300))
}

fn jordan_layer() -> Check {
    let mut rng = rng_from_seed(707);
    let tp = |a: &CMatrix, b: &CMatrix, c: &CMatrix| triple_product(a, b, c).unwrap();
    let (mut identity, mut round_trip, mut brackets) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let (p, q) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let [u, v, x, y, z] = std::array::from_fn(|_| disk_matrix(&mut rng, p, q));
        let lhs = tp(&u, &v, &tp(&x, &y, &z));
        let rhs = &(&tp(&tp(&u, &v, &x), &y, &z) - &tp(&x, &tp(&v, &u, &y), &z)) + &tp(&x, &y, &tp(&u, &v, &z));
        let scale = u.norm() * v.norm() * x.norm() * y.norm() * z.norm();
        identity = identity.max(rel((&lhs - &rhs).norm(), scale));
    }
    for _ in 0..200 {
        let (p, q) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let z = disk_matrix(&mut rng, p, q);
        round_trip = round_trip.max(rel((&reconstruct(&spectral(&z)) - &z).norm(), z.norm()));
    }
    for _ in 0..200 {
        let (p, q) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let (u, v, z) = (in_unit_ball(&mut rng, p, q), in_unit_ball(&mut rng, p, q), in_unit_ball(&mut rng, p, q));
        let br = field_bracket(&VectorField::Quadratic(u.clone()), &VectorField::Quadratic(v.clone()), &z).unwrap();
        brackets = brackets.max(rel(br.norm(), u.norm() * v.norm() * z.norm().powi(3)));
    }
    Check {
        ok: identity <= 1e-12 && round_trip <= 1e-10 && brackets <= 1e-12,
        detail: format!("triple identity {identity:.1e}, spectral round-trip {round_trip:.1e}, quadratic brackets {brackets:.1e}"),
    }
}

/// All closed arrow sequences of each length up to `max_len`, reduced to
/// their least label rotation.
fn brute_force(dq: &DoubleQuiver, max_len: usize) -> BTreeSet<Vec<String>> {
    let arrows = dq.arrows();
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for path in &frontier {
            for a in 0..arrows.len() {
                if path.last().is_some_and(|&l| arrows[l].head != arrows[a].tail) {
                    continue;
                }
                let mut p = path.clone();
                p.push(a);
                if arrows[p[0]].tail == arrows[a].head {
                    let labels: Vec<String> = p.iter().map(|&i| arrows[i].label.clone()).collect();
                    let least = (0..labels.len())
                        .map(|r| {
                            let mut l = labels.clone();
                            l.rotate_left(r);
                            l
                        })
                        .min()
                        .unwrap();
                    out.insert(least);
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    out
}

fn cycle_enumeration() -> Check {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for k in 1..=4 {
        let arrows = (1..k).map(|i| Arrow::new(i - 1, i, format!("A{i}"))).collect();
        let dq = double(&Quiver::new(vec![1; k], arrows).unwrap());
        for max_len in 1..=6 {
            checked += 1;
            let listed: Vec<Vec<String>> = enumerate_cycles(&dq, max_len)
                .iter()
                .map(|w| w.labels(&dq).into_iter().map(String::from).collect())
                .collect();
            let fast: BTreeSet<Vec<String>> = listed.iter().cloned().collect();
            if fast.len() != listed.len() || fast != brute_force(&dq, max_len) {
                mismatches.push(format!("{k} vertices/max_len {max_len}"));
            }
        }
    }
    Check {
        ok: mismatches.is_empty(),
        detail: format!("{checked} cases, mismatches {:?}", mismatches),
    }
}

fn cli_determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_modulikit"))
            .args(["selftest", "--seed", "42"])
            .env_remove("MODULIKIT_SEED")
            .output()
            .expect("binary runs")
    };
    let (first, second) = (run(), run());
    let both_pass = first.status.code() == Some(0) && second.status.code() == Some(0);
    let identical = first.stdout == second.stdout && !first.stdout.is_empty();
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap_or_default();
    let all = parsed["result"]["passed"] == serde_json::Value::Bool(true);
    Check {
        ok: both_pass && identical && all,
        detail: format!("exit 0 twice {both_pass}, all properties pass {all}, byte-identical {identical}"),
    }
}

fn main() {
    let results = [
        criterion(1, "involution algebra", 5, involution_algebra),
        criterion(2, "rank-1 purity", 5, rank_one_purity),
        criterion(3, "covariance structure", 5, covariance_structure),
        criterion(4, "involution fixed points", 2, involution_fixed_points),
        criterion(5, "moment map", 5, moment_maps),
        criterion(6, "trace invariants", 10, trace_invariants),
        criterion(7, "Jordan layer", 10, jordan_layer),
        criterion(8, "cycle enumeration oracle", 5, cycle_enumeration),
        criterion(9, "CLI determinism", 60, cli_determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {}/{} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
