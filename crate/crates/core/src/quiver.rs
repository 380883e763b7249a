//! Chain quivers, their doubles, and representations of the double.
//!
//! The rank-1 moduli space is a product over chains of representation
//! spaces of the doubled chain quiver
//! `V_m ⇄ V_{m+1} ⇄ ⋯ ⇄ V_{m+ℓ}` (arrows `A_i: V_{m+i−1} → V_{m+i}` and
//! opposites `B^i`) modulo `Π GL(V_{m+i})`. Trace invariants of oriented
//! cycles separate closed orbits of that action; an `Indistinguishable`
//! verdict is therefore never a proof of equivalence.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::connection::ConnectionData;
use crate::linalg::{CMatrix, C64};
use crate::weights::{chains, ChainDecomposition, WeightDecomposition};
use crate::{Error, Result, NORM_FLOOR};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
    pub label: String,
}

impl Arrow {
    pub fn new(tail: usize, head: usize, label: impl Into<String>) -> Self {
        Self { tail, head, label: label.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    dims: Vec<usize>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(dims: Vec<usize>, arrows: Vec<Arrow>) -> Result<Self> {
        if let Some(v) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidQuiver(format!("vertex {v} has dimension 0")));
        }
        let mut labels = BTreeSet::new();
        for a in &arrows {
            if a.tail >= dims.len() || a.head >= dims.len() {
                return Err(Error::InvalidQuiver(format!("arrow {} has an endpoint out of range", a.label)));
            }
            if !labels.insert(a.label.as_str()) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow label {}", a.label)));
            }
        }
        Ok(Self { dims, arrows })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.len()
    }

    /// `Σ dim V_i`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// One quiver per chain, joined as a disjoint union. A single chain gets
/// labels `A1, A2, …`; with several chains the labels are prefixed `W<k>.`.
pub fn chain_quiver(ch: &ChainDecomposition) -> Quiver {
    let mut dims = Vec::new();
    let mut arrows = Vec::new();
    let prefixed = ch.chains.len() > 1;
    for (k, chain) in ch.chains.iter().enumerate() {
        let offset = dims.len();
        dims.extend_from_slice(&chain.dims);
        for i in 1..chain.len() {
            let label = if prefixed { format!("W{k}.A{i}") } else { format!("A{i}") };
            arrows.push(Arrow::new(offset + i - 1, offset + i, label));
        }
    }
    Quiver { dims, arrows }
}

/// A quiver with every arrow paired with an opposite arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleQuiver {
    quiver: Quiver,
    originals: usize,
}

/// Label of the arrow opposite to `label`: a final segment `A<rest>` becomes
/// `B<rest>`, anything else gets a `*` suffix.
fn opposite_label(label: &str) -> String {
    let (prefix, last) = match label.rfind('.') {
        Some(p) => label.split_at(p + 1),
        None => ("", label),
    };
    match last.strip_prefix('A') {
        Some(rest) => format!("{prefix}B{rest}"),
        None => format!("{label}*"),
    }
}

/// Adds `ā: head → tail` for every arrow `a`; originals keep their indices
/// and the opposite of arrow `i` is arrow `i + n`.
pub fn double(q: &Quiver) -> DoubleQuiver {
    let mut used: BTreeSet<String> = q.arrows.iter().map(|a| a.label.clone()).collect();
    let mut arrows = q.arrows.clone();
    for a in &q.arrows {
        let mut label = opposite_label(&a.label);
        while used.contains(&label) {
            label.push('*');
        }
        used.insert(label.clone());
        arrows.push(Arrow::new(a.head, a.tail, label));
    }
    DoubleQuiver { quiver: Quiver { dims: q.dims.clone(), arrows }, originals: q.arrows.len() }
}

impl DoubleQuiver {
    pub fn dims(&self) -> &[usize] {
        &self.quiver.dims
    }

    /// All arrows: originals first, then their opposites in the same order.
    pub fn arrows(&self) -> &[Arrow] {
        &self.quiver.arrows
    }

    pub fn original_count(&self) -> usize {
        self.originals
    }

    pub fn is_original(&self, a: usize) -> bool {
        a < self.originals
    }

    pub fn opposite(&self, a: usize) -> usize {
        if a < self.originals {
            a + self.originals
        } else {
            a - self.originals
        }
    }

    /// The undoubled quiver.
    pub fn base(&self) -> Quiver {
        Quiver { dims: self.quiver.dims.clone(), arrows: self.quiver.arrows[..self.originals].to_vec() }
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.quiver.arrows.iter().position(|a| a.label == label)
    }

    pub fn total_dim(&self) -> usize {
        self.quiver.total_dim()
    }
}

/// Representation of a double quiver: `x_a: V_tail → V_head` per arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleQuiverRep {
    quiver: DoubleQuiver,
    matrices: Vec<CMatrix>,
}

impl DoubleQuiverRep {
    /// `matrices[a]` must be `dim(head a) × dim(tail a)`.
    pub fn new(quiver: DoubleQuiver, matrices: Vec<CMatrix>) -> Result<Self> {
        let arrows = quiver.arrows();
        if matrices.len() != arrows.len() {
            return Err(Error::InvalidQuiver(format!(
                "{} arrows but {} matrices",
                arrows.len(),
                matrices.len()
            )));
        }
        for (a, m) in arrows.iter().zip(&matrices) {
            let expected = (quiver.dims()[a.head], quiver.dims()[a.tail]);
            if m.shape() != expected {
                return Err(Error::DimensionMismatch { expected, found: m.shape() });
            }
        }
        Ok(Self { quiver, matrices })
    }

    pub fn zero(quiver: DoubleQuiver) -> Self {
        let matrices = quiver
            .arrows()
            .iter()
            .map(|a| CMatrix::zeros(quiver.dims()[a.head], quiver.dims()[a.tail]))
            .collect();
        Self { quiver, matrices }
    }

    pub fn quiver(&self) -> &DoubleQuiver {
        &self.quiver
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, label: &str) -> Option<&CMatrix> {
        self.quiver.arrow_index(label).map(|a| &self.matrices[a])
    }
}

/// Arrow matrices of the doubled chain quiver carried by `(A, B)`:
/// `A_i` is the block of `A` from level `i−1` to level `i` of its chain and
/// `B^i` the block of `B` from level `i` back to level `i−1`.
pub fn from_connection(c: &ConnectionData) -> Result<DoubleQuiverRep> {
    if let Some(f) = c.forbidden_entries().first() {
        return Err(Error::CovarianceViolation { row: f.row, col: f.col });
    }
    let d = c.decomposition();
    let ch = chains(d)?;
    let dq = double(&chain_quiver(&ch));
    let n_orig = dq.original_count();
    let mut matrices = alloc::vec![CMatrix::zeros(0, 0); 2 * n_orig];
    let mut arrow = 0;
    for chain in &ch.chains {
        for i in 1..chain.len() {
            let lower = &d.blocks()[chain.blocks[i - 1]].indices;
            let upper = &d.blocks()[chain.blocks[i]].indices;
            matrices[arrow] = c.a().select(upper, lower);
            matrices[arrow + n_orig] = c.b().select(lower, upper);
            arrow += 1;
        }
    }
    DoubleQuiverRep::new(dq, matrices)
}

/// Inverse of [`from_connection`]: scatter arrow blocks back into `(A, B)`.
pub fn to_connection(rep: &DoubleQuiverRep, d: &WeightDecomposition) -> Result<ConnectionData> {
    let ch = chains(d)?;
    if double(&chain_quiver(&ch)) != rep.quiver {
        return Err(Error::QuiverMismatch);
    }
    let n = d.dim();
    let n_orig = rep.quiver.original_count();
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, n);
    let mut arrow = 0;
    for chain in &ch.chains {
        for i in 1..chain.len() {
            let lower = &d.blocks()[chain.blocks[i - 1]].indices;
            let upper = &d.blocks()[chain.blocks[i]].indices;
            a.set_selected(upper, lower, &rep.matrices[arrow]);
            b.set_selected(lower, upper, &rep.matrices[arrow + n_orig]);
            arrow += 1;
        }
    }
    ConnectionData::new(d.clone(), a, b)
}

/// Range of arrows the moment map sums over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MomentConvention {
    /// Every arrow of the double; the map vanishes identically.
    #[default]
    Paper,
    /// Original arrows only: `μ_i = Σ_{head a = i} x_a x_ā − Σ_{tail a = i} x_ā x_a`.
    Standard,
}

/// `μ(x)_i = Σ_{a: head = i} x_a·x_ā − Σ_{a: tail = i} x_ā·x_a`, one
/// `dim V_i × dim V_i` matrix per vertex.
pub fn moment_map(rep: &DoubleQuiverRep, convention: MomentConvention) -> Vec<CMatrix> {
    let dq = &rep.quiver;
    let mut mu: Vec<CMatrix> = dq.dims().iter().map(|&d| CMatrix::zeros(d, d)).collect();
    let range = match convention {
        MomentConvention::Paper => dq.arrows().len(),
        MomentConvention::Standard => dq.original_count(),
    };
    for a in 0..range {
        let arrow = &dq.arrows()[a];
        let x = &rep.matrices[a];
        let xbar = &rep.matrices[dq.opposite(a)];
        mu[arrow.head] = &mu[arrow.head] + &(x * xbar);
        mu[arrow.tail] = &mu[arrow.tail] - &(xbar * x);
    }
    mu
}

/// `x_a ↦ g_head·x_a·g_tail⁻¹`.
pub fn gauge_action(rep: &DoubleQuiverRep, g: &[CMatrix]) -> Result<DoubleQuiverRep> {
    let dims = rep.quiver.dims();
    if g.len() != dims.len() {
        return Err(Error::DimensionMismatch { expected: (dims.len(), 1), found: (g.len(), 1) });
    }
    for (gv, &d) in g.iter().zip(dims) {
        if gv.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: (d, d), found: gv.shape() });
        }
    }
    let inv: Vec<CMatrix> = g.iter().map(CMatrix::inverse).collect::<Result<_>>()?;
    let matrices = rep
        .quiver
        .arrows()
        .iter()
        .zip(&rep.matrices)
        .map(|(a, x)| &(&g[a.head] * x) * &inv[a.tail])
        .collect();
    Ok(DoubleQuiverRep { quiver: rep.quiver.clone(), matrices })
}

/// A closed path, arrows listed in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleWord(pub Vec<usize>);

impl CycleWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels<'q>(&self, dq: &'q DoubleQuiver) -> Vec<&'q str> {
        self.0.iter().map(|&a| dq.arrows()[a].label.as_str()).collect()
    }

    /// Labels joined by spaces.
    pub fn display(&self, dq: &DoubleQuiver) -> String {
        self.labels(dq).join(" ")
    }

    /// Consecutive arrows compose and the last one returns to the start.
    pub fn is_closed_path(&self, dq: &DoubleQuiver) -> bool {
        let arrows = dq.arrows();
        let k = self.0.len();
        k > 0 && (0..k).all(|i| arrows[self.0[i]].head == arrows[self.0[(i + 1) % k]].tail)
    }

    pub fn rotate(&self, by: usize) -> CycleWord {
        let mut w = self.0.clone();
        let k = w.len().max(1);
        w.rotate_left(by % k);
        CycleWord(w)
    }

    /// Lexicographically least rotation of the label sequence.
    pub fn canonical(&self, dq: &DoubleQuiver) -> CycleWord {
        (0..self.len().max(1))
            .map(|r| self.rotate(r))
            .min_by(|x, y| x.labels(dq).cmp(&y.labels(dq)))
            .unwrap_or_else(|| self.clone())
    }
}

/// Ordering used for reports: shorter words first, then by labels.
fn word_order(dq: &DoubleQuiver, x: &CycleWord, y: &CycleWord) -> core::cmp::Ordering {
    x.len().cmp(&y.len()).then_with(|| x.labels(dq).cmp(&y.labels(dq)))
}

/// `min(N², 12)` for total dimension `N`.
pub fn default_max_len(total_dim: usize) -> usize {
    (total_dim * total_dim).clamp(1, 12)
}

/// One canonical representative of every rotation class of closed oriented
/// paths of length `1..=max_len`, ordered by length then label sequence.
pub fn enumerate_cycles(dq: &DoubleQuiver, max_len: usize) -> Vec<CycleWord> {
    let arrows = dq.arrows();
    // rank of each arrow in label order; a canonical word starts at its minimum
    let mut by_label: Vec<usize> = (0..arrows.len()).collect();
    by_label.sort_by(|&a, &b| arrows[a].label.cmp(&arrows[b].label));
    let mut rank = alloc::vec![0; arrows.len()];
    for (r, &a) in by_label.iter().enumerate() {
        rank[a] = r;
    }
    let mut out_of: Vec<Vec<usize>> = alloc::vec![Vec::new(); dq.dims().len()];
    for (a, arrow) in arrows.iter().enumerate() {
        out_of[arrow.tail].push(a);
    }

    let mut found = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    for start in 0..arrows.len() {
        path.clear();
        path.push(start);
        extend(dq, &out_of, &rank, max_len, &mut path, &mut found);
    }
    found.sort_by(|x, y| word_order(dq, x, y));
    found
}

fn extend(
    dq: &DoubleQuiver,
    out_of: &[Vec<usize>],
    rank: &[usize],
    max_len: usize,
    path: &mut Vec<usize>,
    found: &mut Vec<CycleWord>,
) {
    let arrows = dq.arrows();
    let start = path[0];
    let last = *path.last().expect("path is never empty");
    if arrows[last].head == arrows[start].tail {
        let w = CycleWord(path.clone());
        if w.canonical(dq) == w {
            found.push(w);
        }
    }
    if path.len() == max_len {
        return;
    }
    for &next in &out_of[arrows[last].head] {
        if rank[next] >= rank[start] {
            path.push(next);
            extend(dq, out_of, rank, max_len, path, found);
            path.pop();
        }
    }
}

/// Product `x_{a_k}···x_{a_1}` along a closed path.
pub fn cycle_product(rep: &DoubleQuiverRep, word: &CycleWord) -> CMatrix {
    let arrows = rep.quiver.arrows();
    let base = arrows[word.0[0]].tail;
    let mut acc = CMatrix::identity(rep.quiver.dims()[base]);
    for &a in &word.0 {
        acc = &rep.matrices[a] * &acc;
    }
    acc
}

pub fn cycle_trace(rep: &DoubleQuiverRep, word: &CycleWord) -> C64 {
    cycle_product(rep, word).trace()
}

/// `Π ‖x_a‖` along the word: the scale floating error in a cycle trace
/// is measured against.
pub fn cycle_scale(rep: &DoubleQuiverRep, word: &CycleWord) -> f64 {
    word.0.iter().map(|&a| rep.matrices[a].norm()).product()
}

/// Traces of every canonical cycle up to `max_len`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVector {
    pub max_len: usize,
    pub entries: Vec<(CycleWord, C64)>,
}

impl InvariantVector {
    pub fn get(&self, word: &CycleWord) -> Option<C64> {
        self.entries.iter().find(|(w, _)| w == word).map(|&(_, t)| t)
    }
}

pub fn invariants(rep: &DoubleQuiverRep, max_len: usize) -> InvariantVector {
    let entries = enumerate_cycles(&rep.quiver, max_len)
        .into_iter()
        .map(|w| {
            let t = cycle_trace(rep, &w);
            (w, t)
        })
        .collect();
    InvariantVector { max_len, entries }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Conclusive: no gauge transformation relates the two representations.
    Distinct { word: CycleWord, first: C64, second: C64 },
    /// Every trace up to `max_len` agrees. Not a proof of equivalence:
    /// non-closed orbits can share all invariants.
    Indistinguishable { max_len: usize, cycles_checked: usize },
}

/// Compares traces cycle by cycle; the first pair with
/// `|t₁ − t₂| > tol·max(|t₁|, |t₂|, Π‖x_a‖, Π‖y_a‖, floor)` certifies
/// distinct orbits.
pub fn equivalence_certificate(
    r1: &DoubleQuiverRep,
    r2: &DoubleQuiverRep,
    max_len: usize,
    tol: f64,
) -> Result<Certificate> {
    if r1.quiver != r2.quiver {
        return Err(Error::QuiverMismatch);
    }
    let cycles = enumerate_cycles(&r1.quiver, max_len);
    for word in &cycles {
        let first = cycle_trace(r1, word);
        let second = cycle_trace(r2, word);
        let scale = first
            .norm()
            .max(second.norm())
            .max(cycle_scale(r1, word))
            .max(cycle_scale(r2, word))
            .max(NORM_FLOOR);
        if (first - second).norm() > tol * scale {
            return Ok(Certificate::Distinct { word: word.clone(), first, second });
        }
    }
    Ok(Certificate::Indistinguishable { max_len, cycles_checked: cycles.len() })
}
