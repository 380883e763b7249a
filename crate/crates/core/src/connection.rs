//! Invariant connections in matrix form.
//!
//! For a rank-1 torus an invariant connection is a pair `(A, B)` of `N×N`
//! matrices with `A = α(1)` raising the weight by one and `B = β(1)` lowering
//! it by one. Higher-rank data is a [`FrameTuple`] of frame values
//! `A_i = α(e_i)`, `B_i = β(e_i)`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;

use crate::linalg::{commutator, is_unitary, lie_sharp, CMatrix, C64};
use crate::weights::{commutant_contains, decompose, f_of, off_block_norm, WeightData, WeightDecomposition};
use crate::{scale_of, Error, Result};

/// Absolute floor added to `‖X‖·‖Y‖` when judging a commutator.
pub const COMMUTATOR_FLOOR: f64 = 1e-12;

/// Which half of the connection a matrix belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// The holomorphic part `α`, raising weights.
    Alpha,
    /// The anti-holomorphic part `β`, lowering weights.
    Beta,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "A",
            Family::Beta => "B",
        }
    }
}

/// Rank-1 covariant connection data `(A, B)` over a weight decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    decomposition: WeightDecomposition,
    a: CMatrix,
    b: CMatrix,
}

impl ConnectionData {
    /// Shapes and rank are checked here; the weight-shift pattern is checked
    /// by [`validate_covariance`].
    pub fn new(decomposition: WeightDecomposition, a: CMatrix, b: CMatrix) -> Result<Self> {
        decomposition.require_rank_one()?;
        let n = decomposition.dim();
        for m in [&a, &b] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: (n, n), found: m.shape() });
            }
        }
        Ok(Self { decomposition, a, b })
    }

    pub fn from_weights(weights: &[i64], a: CMatrix, b: CMatrix) -> Result<Self> {
        Self::new(decompose(&WeightData::rank_one(weights)?), a, b)
    }

    /// The hermitian connection `(A, −A†)`.
    pub fn hermitian(decomposition: WeightDecomposition, a: CMatrix) -> Result<Self> {
        let b = lie_sharp(&a);
        Self::new(decomposition, a, b)
    }

    pub fn decomposition(&self) -> &WeightDecomposition {
        &self.decomposition
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    /// Data supported exactly on the allowed shift pattern, with entries from `fill`.
    pub fn on_pattern(
        decomposition: WeightDecomposition,
        mut fill: impl FnMut(Family, usize, usize) -> C64,
    ) -> Result<Self> {
        decomposition.require_rank_one()?;
        let n = decomposition.dim();
        let mut c = Self { decomposition, a: CMatrix::zeros(n, n), b: CMatrix::zeros(n, n) };
        for i in 0..n {
            for j in 0..n {
                if c.allowed(Family::Alpha, i, j) {
                    c.a[(i, j)] = fill(Family::Alpha, i, j);
                }
                if c.allowed(Family::Beta, i, j) {
                    c.b[(i, j)] = fill(Family::Beta, i, j);
                }
            }
        }
        Ok(c)
    }

    /// Entry `(i, j)` of the given family may be nonzero.
    pub fn allowed(&self, family: Family, i: usize, j: usize) -> bool {
        let shift = self.decomposition.weight_of(i)[0] - self.decomposition.weight_of(j)[0];
        match family {
            Family::Alpha => shift == 1,
            Family::Beta => shift == -1,
        }
    }

    /// Nonzero entries violating the weight-shift pattern.
    pub fn forbidden_entries(&self) -> Vec<ForbiddenEntry> {
        let n = self.dim();
        let mut out = Vec::new();
        for (family, m) in [(Family::Alpha, &self.a), (Family::Beta, &self.b)] {
            for i in 0..n {
                for j in 0..n {
                    let z = m[(i, j)];
                    if z.norm() != 0.0 && !self.allowed(family, i, j) {
                        out.push(ForbiddenEntry { family, index: 0, row: i, col: j, modulus: z.norm() });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenEntry {
    pub family: Family,
    /// Frame index for multi-rank data, 0 for rank-1 data.
    pub index: usize,
    pub row: usize,
    pub col: usize,
    pub modulus: f64,
}

/// Outcome of a structural plus sampled covariance check.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceReport {
    pub forbidden: Vec<ForbiddenEntry>,
    pub samples: usize,
    /// Largest `‖Ad_{f(τ)} X − χ(τ) X‖ / ‖X‖` over samples and matrices.
    pub worst_violation: f64,
    pub tol: f64,
}

impl CovarianceReport {
    pub fn structural_ok(&self) -> bool {
        self.forbidden.is_empty()
    }

    pub fn sampled_ok(&self) -> bool {
        self.worst_violation <= self.tol
    }

    pub fn passed(&self) -> bool {
        self.structural_ok() && self.sampled_ok()
    }
}

/// Deterministic torus points: a Kronecker sequence with irrational
/// per-coordinate steps, so no sample is a root of unity of small order.
pub fn torus_samples(count: usize, rank: usize) -> Vec<Vec<C64>> {
    const STEPS: [f64; 8] = [
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
        0.236_067_977_499_789_7,
        0.645_751_311_064_590_6,
        0.316_624_790_355_4,
        0.605_551_275_463_989_3,
        0.123_105_625_617_660_5,
        0.358_898_943_540_673_6,
    ];
    (0..count)
        .map(|k| {
            (0..rank)
                .map(|i| {
                    let step = STEPS.get(i).copied().unwrap_or_else(|| {
                        let g = 0.618_033_988_749_894_9 * (i + 1) as f64;
                        g - g.floor()
                    });
                    let x = (k as f64 + 0.5) * step + 0.1;
                    C64::from_polar(1.0, core::f64::consts::TAU * (x - x.floor()))
                })
                .collect()
        })
        .collect()
}

/// Relative residual `‖f(τ)·X·f(τ)⁻¹ − χ·X‖ / ‖X‖`.
fn twisted_residual(f: &CMatrix, x: &CMatrix, chi: C64) -> f64 {
    let lhs = &(f * x) * &f.adjoint();
    (&lhs - &x.scale(chi)).norm() / scale_of(x.norm())
}

/// Checks that `A` raises and `B` lowers weights by exactly one, both by an
/// exact zero test and at `samples` points of the circle:
/// `f(τ)·A·f(τ̄) = τA`, `f(τ)·B·f(τ̄) = τ̄B`.
pub fn validate_covariance(c: &ConnectionData, samples: usize, tol: f64) -> Result<CovarianceReport> {
    let mut worst: f64 = 0.0;
    for tau in torus_samples(samples, 1) {
        let f = f_of(&c.decomposition, &tau)?;
        worst = worst.max(twisted_residual(&f, &c.a, tau[0]));
        worst = worst.max(twisted_residual(&f, &c.b, tau[0].conj()));
    }
    Ok(CovarianceReport { forbidden: c.forbidden_entries(), samples, worst_violation: worst, tol })
}

/// `(A, B) ↦ (#∘B, #∘A) = (−B†, −A†)`.
pub fn involution(c: &ConnectionData) -> ConnectionData {
    ConnectionData { decomposition: c.decomposition.clone(), a: lie_sharp(&c.b), b: lie_sharp(&c.a) }
}

/// Fixed point of [`involution`]: `‖B + A†‖ ≤ tol·max(‖A‖, floor)`.
pub fn is_hermitian(c: &ConnectionData, tol: f64) -> bool {
    (&c.b + &c.a.adjoint()).norm() <= tol * scale_of(c.a.norm())
}

/// `(A, B) ↦ (hAh⁻¹, hBh⁻¹)` for `h` in the centralizer.
pub fn gauge(c: &ConnectionData, h: &CMatrix, tol: f64) -> Result<ConnectionData> {
    if !commutant_contains(&c.decomposition, h, tol)? {
        return Err(Error::NotInCommutant { off_block: off_block_norm(&c.decomposition, h)? });
    }
    let hinv = h.inverse()?;
    Ok(ConnectionData {
        decomposition: c.decomposition.clone(),
        a: &(h * &c.a) * &hinv,
        b: &(h * &c.b) * &hinv,
    })
}

/// Frame values `A_i = α(e_i)`, `B_i = β(e_i)` of a rank-`r` triple.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTuple {
    a_list: Vec<CMatrix>,
    b_list: Vec<CMatrix>,
    weights: Option<WeightData>,
}

impl FrameTuple {
    pub fn new(a_list: Vec<CMatrix>, b_list: Vec<CMatrix>, weights: Option<WeightData>) -> Result<Self> {
        let r = a_list.len();
        if r == 0 {
            return Err(Error::InvalidWeights("frame tuple needs rank r >= 1".into()));
        }
        if b_list.len() != r {
            return Err(Error::DimensionMismatch { expected: (r, 1), found: (b_list.len(), 1) });
        }
        let n = a_list[0].rows();
        for m in a_list.iter().chain(&b_list) {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: (n, n), found: m.shape() });
            }
        }
        if let Some(w) = &weights {
            if w.rank() != r || w.dim() != n {
                return Err(Error::InvalidWeights(format!(
                    "weights have rank {} and dimension {}, frame tuple has rank {r} and dimension {n}",
                    w.rank(),
                    w.dim()
                )));
            }
        }
        Ok(Self { a_list, b_list, weights })
    }

    pub fn rank(&self) -> usize {
        self.a_list.len()
    }

    pub fn dim(&self) -> usize {
        self.a_list[0].rows()
    }

    pub fn a_list(&self) -> &[CMatrix] {
        &self.a_list
    }

    pub fn b_list(&self) -> &[CMatrix] {
        &self.b_list
    }

    pub fn weights(&self) -> Option<&WeightData> {
        self.weights.as_ref()
    }

    pub fn family(&self, family: Family) -> &[CMatrix] {
        match family {
            Family::Alpha => &self.a_list,
            Family::Beta => &self.b_list,
        }
    }

    /// `X ↦ hXh⁻¹` applied to every frame value.
    pub fn conjugate(&self, h: &CMatrix) -> Result<Self> {
        let hinv = h.inverse()?;
        let conj = |m: &CMatrix| &(h * m) * &hinv;
        Ok(Self {
            a_list: self.a_list.iter().map(conj).collect(),
            b_list: self.b_list.iter().map(conj).collect(),
            weights: self.weights.clone(),
        })
    }

    /// `A_I = Σ_{i∈I} A_i` (or `B_I`).
    pub fn partial_sum(&self, family: Family, indices: &[usize]) -> CMatrix {
        let n = self.dim();
        indices.iter().fold(CMatrix::zeros(n, n), |acc, &i| &acc + &self.family(family)[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurityWitness {
    pub family: Family,
    pub i: usize,
    pub j: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurityReport {
    pub pure: bool,
    /// First offending pair, `Alpha` before `Beta`, then lexicographic in `(i, j)`.
    pub witness: Option<PurityWitness>,
}

/// Commutator criterion: `[A_i, A_j] = 0 = [B_i, B_j]` for all frame indices,
/// each judged against `tol·(‖X‖‖Y‖ + 1e-12)`.
pub fn is_pure(t: &FrameTuple, tol: f64) -> PurityReport {
    for family in [Family::Alpha, Family::Beta] {
        let list = t.family(family);
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let norm = commutator(&list[i], &list[j]).expect("frame tuple shapes are uniform").norm();
                if norm > tol * (list[i].norm() * list[j].norm() + COMMUTATOR_FLOOR) {
                    return PurityReport { pure: false, witness: Some(PurityWitness { family, i, j, norm }) };
                }
            }
        }
    }
    PurityReport { pure: true, witness: None }
}

/// Torus covariance for multi-rank data: `Ad_{f(τ)} A_i = τ_i A_i` and
/// `Ad_{f(τ)} B_i = τ̄_i B_i` for `τ ∈ T^r`, checked structurally (A_i shifts
/// weights by the `i`-th unit vector, B_i by its negative) and at `samples`
/// torus points.
pub fn check_torus_multirank(t: &FrameTuple, samples: usize, tol: f64) -> Result<CovarianceReport> {
    let w = t.weights.as_ref().ok_or(Error::MissingWeights)?;
    let d = decompose(w);
    let r = t.rank();
    let n = t.dim();
    let mut forbidden = Vec::new();
    for (family, sign) in [(Family::Alpha, 1), (Family::Beta, -1)] {
        for (k, m) in t.family(family).iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let z = m[(i, j)];
                    if z.norm() == 0.0 {
                        continue;
                    }
                    let (wi, wj) = (d.weight_of(i), d.weight_of(j));
                    let ok = (0..r).all(|c| wi[c] - wj[c] == if c == k { sign } else { 0 });
                    if !ok {
                        forbidden.push(ForbiddenEntry { family, index: k, row: i, col: j, modulus: z.norm() });
                    }
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for tau in torus_samples(samples, r) {
        let f = f_of(&d, &tau)?;
        for ((a, b), &z) in t.a_list.iter().zip(&t.b_list).zip(&tau) {
            worst = worst.max(twisted_residual(&f, a, z));
            worst = worst.max(twisted_residual(&f, b, z.conj()));
        }
    }
    Ok(CovarianceReport { forbidden, samples, worst_violation: worst, tol })
}

/// Assertion `k·e_I = e_J`, carried by the image `f(k) ∈ U(N)` of the group
/// element `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusWitness {
    pub k: CMatrix,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

/// Unitarity tolerance for witness matrices.
pub const WITNESS_UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerViolation {
    pub witness: usize,
    pub family: Family,
    /// `‖f(k)·X_I·f(k)⁻¹ − X_J‖ / max(‖X_I‖, ‖X_J‖)`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerReport {
    pub checked: usize,
    pub violations: Vec<StabilizerViolation>,
    pub tol: f64,
}

impl StabilizerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn witness_error(w: usize, msg: String) -> Error {
    Error::BadWitness(format!("witness {w}: {msg}"))
}

/// Checks `Ad_{f(k)} A_I = A_J` and `Ad_{f(k)} B_I = B_J` for every supplied
/// witness; the stabilizer group itself is never enumerated.
pub fn check_stabilizer_sums(t: &FrameTuple, witnesses: &[TorusWitness], tol: f64) -> Result<StabilizerReport> {
    let n = t.dim();
    let r = t.rank();
    for (w, wit) in witnesses.iter().enumerate() {
        if wit.from.len() != wit.to.len() {
            return Err(witness_error(w, format!("|I| = {} but |J| = {}", wit.from.len(), wit.to.len())));
        }
        for set in [&wit.from, &wit.to] {
            if let Some(&bad) = set.iter().find(|&&i| i >= r) {
                return Err(witness_error(w, format!("frame index {bad} out of range for rank {r}")));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(witness_error(w, "repeated frame index".into()));
            }
        }
        if wit.k.shape() != (n, n) {
            return Err(witness_error(w, format!("f(k) is {}x{}, expected {n}x{n}", wit.k.rows(), wit.k.cols())));
        }
        if !is_unitary(&wit.k, WITNESS_UNITARY_TOL) {
            return Err(witness_error(w, "f(k) is not unitary".into()));
        }
    }
    let mut violations = Vec::new();
    for (w, wit) in witnesses.iter().enumerate() {
        let kinv = wit.k.adjoint();
        for family in [Family::Alpha, Family::Beta] {
            let xi = t.partial_sum(family, &wit.from);
            let xj = t.partial_sum(family, &wit.to);
            let moved = &(&wit.k * &xi) * &kinv;
            let residual = (&moved - &xj).norm() / scale_of(xi.norm().max(xj.norm()));
            if residual > tol {
                violations.push(StabilizerViolation { witness: w, family, residual });
            }
        }
    }
    Ok(StabilizerReport { checked: witnesses.len(), violations, tol })
}

/// Build a rank-`r` frame tuple from weight data with the given supports:
/// every allowed entry of `A_i` / `B_i` is filled by `fill`.
pub fn frame_on_pattern(
    weights: &WeightData,
    mut fill: impl FnMut(Family, usize, usize, usize) -> C64,
) -> Result<FrameTuple> {
    let r = weights.rank();
    let n = weights.dim();
    let ws = weights.weights();
    let mut a_list = vec![CMatrix::zeros(n, n); r];
    let mut b_list = vec![CMatrix::zeros(n, n); r];
    for k in 0..r {
        for i in 0..n {
            for j in 0..n {
                let shift: Vec<i64> = (0..r).map(|c| ws[i][c] - ws[j][c]).collect();
                let unit = |sign: i64| (0..r).all(|c| shift[c] == if c == k { sign } else { 0 });
                if unit(1) {
                    a_list[k][(i, j)] = fill(Family::Alpha, k, i, j);
                }
                if unit(-1) {
                    b_list[k][(i, j)] = fill(Family::Beta, k, i, j);
                }
            }
        }
    }
    FrameTuple::new(a_list, b_list, Some(weights.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sharp;
    use crate::sampling::{disk_matrix, invertible, rng_from_seed};
    use crate::weights::sample_commutant;

    fn c1(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn e(n: usize, i: usize, j: usize) -> CMatrix {
        CMatrix::unit(n, n, i, j)
    }

    #[test]
    fn covariance_examples() {
        // weights [0,1]: A = a·E_21 raises, B = b·E_12 lowers
        let c = ConnectionData::from_weights(&[0, 1], e(2, 1, 0).scale(c1(2.0)), e(2, 0, 1).scale(c1(-3.0))).unwrap();
        let rep = validate_covariance(&c, 16, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:?}");

        let mut a = e(2, 1, 0);
        a[(1, 1)] = c1(0.5);
        let c = ConnectionData::from_weights(&[0, 1], a, CMatrix::zeros(2, 2)).unwrap();
        let rep = validate_covariance(&c, 16, 1e-10).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.forbidden.len(), 1);
        assert_eq!((rep.forbidden[0].row, rep.forbidden[0].col), (1, 1));
        assert!(!rep.sampled_ok());

        // a gap of two forbids every entry of A
        for (i, j) in [(0, 1), (1, 0), (0, 0)] {
            let c = ConnectionData::from_weights(&[0, 2], e(2, i, j), CMatrix::zeros(2, 2)).unwrap();
            assert!(!validate_covariance(&c, 8, 1e-10).unwrap().passed());
        }
    }

    #[test]
    fn b_lowers_weight() {
        // B = E_21 would raise the weight and must be rejected
        let c = ConnectionData::from_weights(&[0, 1], CMatrix::zeros(2, 2), e(2, 1, 0)).unwrap();
        let rep = validate_covariance(&c, 8, 1e-10).unwrap();
        assert!(!rep.structural_ok());
        assert_eq!(rep.forbidden[0].family, Family::Beta);
    }

    #[test]
    fn rank_two_connection_data_is_rejected() {
        let d = decompose(&WeightData::new(2, vec![vec![0, 0], vec![1, 0]]).unwrap());
        let err = ConnectionData::new(d, CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap_err();
        assert_eq!(err, Error::RankNotOne { rank: 2 });
    }

    #[test]
    fn purity_examples() {
        let z = CMatrix::zeros(3, 3);
        let t = FrameTuple::new(vec![e(3, 0, 1)], vec![z.clone()], None).unwrap();
        assert!(is_pure(&t, 1e-10).pure);

        let t = FrameTuple::new(vec![e(3, 0, 1), e(3, 0, 2)], vec![z.clone(), z.clone()], None).unwrap();
        assert!(is_pure(&t, 1e-10).pure);

        let t = FrameTuple::new(vec![e(3, 0, 1), e(3, 1, 0)], vec![z.clone(), z], None).unwrap();
        let rep = is_pure(&t, 1e-10);
        assert!(!rep.pure);
        let w = rep.witness.unwrap();
        assert_eq!((w.family, w.i, w.j), (Family::Alpha, 0, 1));
        // [E_12, E_21] = diag(1, -1, 0)
        assert!((w.norm - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn involution_examples() {
        let c = ConnectionData::from_weights(&[0, 1], e(2, 1, 0), CMatrix::zeros(2, 2)).unwrap();
        let ci = involution(&c);
        assert!(ci.a().is_zero());
        assert_eq!(ci.b(), &-e(2, 0, 1));

        let zero = ConnectionData::from_weights(&[0, 1], CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(involution(&zero), zero);
    }

    #[test]
    fn lie_sharp_is_the_differential_of_sharp() {
        // central difference of h ↦ (h†)⁻¹ along I + tX
        let mut rng = rng_from_seed(3);
        for n in 1..6 {
            let x = disk_matrix(&mut rng, n, n);
            let t = 1e-5;
            let id = CMatrix::identity(n);
            let plus = sharp(&(&id + &x.scale_real(t))).unwrap();
            let minus = sharp(&(&id - &x.scale_real(t))).unwrap();
            let fd = (&plus - &minus).scale_real(1.0 / (2.0 * t));
            assert!((&fd - &lie_sharp(&x)).norm() < 1e-6 * x.norm());
        }
    }

    #[test]
    fn hermitian_examples() {
        let d = decompose(&WeightData::rank_one(&[0, 1, 1, 2]).unwrap());
        let mut rng = rng_from_seed(11);
        let raw = ConnectionData::on_pattern(d.clone(), |_, _, _| crate::sampling::disk(&mut rng)).unwrap();
        let h = ConnectionData::hermitian(d, raw.a().clone()).unwrap();
        assert!(is_hermitian(&h, 1e-12));
        assert_eq!(involution(&h), h);
        assert!(!is_hermitian(&raw, 1e-12));

        let c = ConnectionData::from_weights(&[0, 1], e(2, 1, 0), CMatrix::zeros(2, 2)).unwrap();
        assert!(!is_hermitian(&c, 1e-10));
    }

    #[test]
    fn gauge_examples() {
        let a = e(2, 1, 0).scale(c1(5.0));
        let b = e(2, 0, 1).scale(c1(7.0));
        let c = ConnectionData::from_weights(&[0, 1], a, b).unwrap();
        assert_eq!(gauge(&c, &CMatrix::identity(2), 1e-12).unwrap(), c);

        // A-block a ↦ g1·a·g0⁻¹, B-block b ↦ g0·b·g1⁻¹
        let h = CMatrix::diag(&[c1(2.0), C64::new(0.0, 3.0)]);
        let g = gauge(&c, &h, 1e-12).unwrap();
        assert!((g.a()[(1, 0)] - C64::new(0.0, 7.5)).norm() < 1e-14);
        assert!((g.b()[(0, 1)] - C64::new(0.0, -14.0 / 3.0)).norm() < 1e-14);

        assert!(matches!(gauge(&c, &e(2, 0, 1), 1e-12), Err(Error::NotInCommutant { .. })));
        let singular = CMatrix::diag(&[c1(1.0), c1(0.0)]);
        assert_eq!(gauge(&c, &singular, 1e-12), Err(Error::SingularMatrix));
    }

    #[test]
    fn gauge_preserves_purity_and_pattern() {
        let mut rng = rng_from_seed(5);
        let d = decompose(&WeightData::rank_one(&[0, 0, 1, 2, 2, 5]).unwrap());
        let c = ConnectionData::on_pattern(d.clone(), |_, _, _| crate::sampling::disk(&mut rng)).unwrap();
        let h = sample_commutant(&d, 9);
        let g = gauge(&c, &h, 1e-12).unwrap();
        assert!(g.forbidden_entries().is_empty());
        assert!(involution(&g).forbidden_entries().is_empty());

        let t = FrameTuple::new(vec![c.a().clone()], vec![c.b().clone()], None).unwrap();
        let gt = t.conjugate(&invertible(&mut rng, 6, 1e3)).unwrap();
        assert!(is_pure(&gt, 1e-10).pure);
    }

    #[test]
    fn multirank_torus_checks() {
        let w = WeightData::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let mut rng = rng_from_seed(2);
        let t = frame_on_pattern(&w, |_, _, _, _| crate::sampling::disk(&mut rng)).unwrap();
        let rep = check_torus_multirank(&t, 16, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:?}");

        let mut a_list = t.a_list().to_vec();
        a_list[0][(2, 0)] = c1(1.0); // shift (0,1) belongs to A_2
        let bad = FrameTuple::new(a_list, t.b_list().to_vec(), Some(w)).unwrap();
        let rep = check_torus_multirank(&bad, 16, 1e-10).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.forbidden.len(), 1);
        assert_eq!(rep.forbidden[0].index, 0);

        let no_w = FrameTuple::new(t.a_list().to_vec(), t.b_list().to_vec(), None).unwrap();
        assert_eq!(check_torus_multirank(&no_w, 4, 1e-10), Err(Error::MissingWeights));
    }

    #[test]
    fn multirank_rank_one_matches_covariance() {
        let ws = [0i64, 1, 1, 2, 4];
        let w = WeightData::rank_one(&ws).unwrap();
        let mut rng = rng_from_seed(8);
        let mut a = disk_matrix(&mut rng, 5, 5);
        let c_bad = ConnectionData::from_weights(&ws, a.clone(), CMatrix::zeros(5, 5)).unwrap();
        let t_bad = FrameTuple::new(vec![a.clone()], vec![CMatrix::zeros(5, 5)], Some(w.clone())).unwrap();
        assert_eq!(
            validate_covariance(&c_bad, 8, 1e-10).unwrap().passed(),
            check_torus_multirank(&t_bad, 8, 1e-10).unwrap().passed()
        );
        let c_good = ConnectionData::on_pattern(decompose(&w), |_, _, _| c1(1.5)).unwrap();
        a = c_good.a().clone();
        let t_good = FrameTuple::new(vec![a], vec![c_good.b().clone()], Some(w)).unwrap();
        let r1 = validate_covariance(&c_good, 8, 1e-10).unwrap();
        let r2 = check_torus_multirank(&t_good, 8, 1e-10).unwrap();
        assert!(r1.passed() && r2.passed());
        assert!((r1.worst_violation - r2.worst_violation).abs() < 1e-15);
    }

    #[test]
    fn stabilizer_sum_examples() {
        let mut rng = rng_from_seed(4);
        let a1 = disk_matrix(&mut rng, 3, 3);
        let a2 = disk_matrix(&mut rng, 3, 3);
        let z = CMatrix::zeros(3, 3);
        let t = FrameTuple::new(vec![a1.clone(), a2], vec![z.clone(), z.clone()], None).unwrap();
        let id = CMatrix::identity(3);

        let trivial = TorusWitness { k: id.clone(), from: vec![0, 1], to: vec![0, 1] };
        assert!(check_stabilizer_sums(&t, &[trivial], 1e-10).unwrap().passed());

        let same = FrameTuple::new(vec![a1.clone(), a1.clone()], vec![z.clone(), z.clone()], None).unwrap();
        let swap = TorusWitness { k: id.clone(), from: vec![0], to: vec![1] };
        assert!(check_stabilizer_sums(&same, core::slice::from_ref(&swap), 1e-10).unwrap().passed());

        // f(k) = identity cannot carry A_1 onto a different A_2
        let rep = check_stabilizer_sums(&t, &[swap], 1e-10).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.violations[0].family, Family::Alpha);

        // a permutation matrix that does not intertwine A_1 and A_2
        let p = CMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        let wit = TorusWitness { k: p.clone(), from: vec![0], to: vec![1] };
        assert!(!check_stabilizer_sums(&t, &[wit], 1e-10).unwrap().passed());
        // but one that does is accepted
        let a2 = &(&p * &a1) * &p;
        let t2 = FrameTuple::new(vec![a1, a2], vec![z.clone(), z], None).unwrap();
        let wit = TorusWitness { k: p, from: vec![0], to: vec![1] };
        assert!(check_stabilizer_sums(&t2, &[wit], 1e-10).unwrap().passed());

        let bad = TorusWitness { k: id.clone(), from: vec![0], to: vec![0, 1] };
        assert!(matches!(check_stabilizer_sums(&t, &[bad], 1e-10), Err(Error::BadWitness(_))));
        let bad = TorusWitness { k: id.scale_real(2.0), from: vec![0], to: vec![1] };
        assert!(matches!(check_stabilizer_sums(&t, &[bad], 1e-10), Err(Error::BadWitness(_))));
        let bad = TorusWitness { k: id, from: vec![2], to: vec![1] };
        assert!(matches!(check_stabilizer_sums(&t, &[bad], 1e-10), Err(Error::BadWitness(_))));
    }
}
