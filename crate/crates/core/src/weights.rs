//! Weight-space decomposition of a torus homomorphism `f: T^r → GL_N(C)`.
//!
//! Basis vector `i` carries an integer weight vector `w_i ∈ Z^r`, so that
//! `f(τ) e_i = (Π_k τ_k^{w_i[k]}) e_i`. Grouping equal weights gives
//! `C^N = ⊕ V_m`; for `r = 1` the blocks split further into maximal chains of
//! consecutive weights, and the centralizer of `f` is the group of
//! block-diagonal invertible matrices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows it when std is linked
use num_traits::Float;

use crate::linalg::{svd, CMatrix, C64};
use crate::sampling::{disk, rng_from_seed};
use crate::{scale_of, Error, Result};

/// Integer weights of the standard basis vectors under a rank-`r` torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    rank: usize,
    weights: Vec<Vec<i64>>,
}

impl WeightData {
    pub fn new(rank: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidWeights("torus rank must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidWeights("need at least one basis vector".into()));
        }
        if let Some(i) = weights.iter().position(|w| w.len() != rank) {
            return Err(Error::InvalidWeights(format!(
                "weight {i} has length {}, expected {rank}",
                weights[i].len()
            )));
        }
        Ok(Self { rank, weights })
    }

    /// Rank-1 weights `f(τ)e_i = τ^{m_i} e_i`.
    pub fn rank_one(weights: &[i64]) -> Result<Self> {
        Self::new(1, weights.iter().map(|&m| alloc::vec![m]).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBlock {
    pub weight: Vec<i64>,
    /// Basis indices spanning this weight space, ascending.
    pub indices: Vec<usize>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// `C^N = ⊕ V_m`, blocks sorted by weight (lexicographically for `r > 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    rank: usize,
    blocks: Vec<WeightBlock>,
    block_of: Vec<usize>,
}

/// Grouping of equal weights; block order is ascending in the weight vector.
pub fn decompose(w: &WeightData) -> WeightDecomposition {
    let mut groups: BTreeMap<&[i64], Vec<usize>> = BTreeMap::new();
    for (i, wt) in w.weights.iter().enumerate() {
        groups.entry(wt.as_slice()).or_default().push(i);
    }
    let mut block_of = alloc::vec![0; w.dim()];
    let blocks: Vec<WeightBlock> = groups
        .into_iter()
        .enumerate()
        .map(|(b, (wt, indices))| {
            for &i in &indices {
                block_of[i] = b;
            }
            WeightBlock { weight: wt.to_vec(), indices }
        })
        .collect();
    WeightDecomposition { rank: w.rank, blocks, block_of }
}

impl WeightDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    /// Block containing basis vector `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    /// Weight vector of basis vector `i`.
    pub fn weight_of(&self, i: usize) -> &[i64] {
        &self.blocks[self.block_of[i]].weight
    }

    /// Rank-1 weight of basis vector `i`.
    pub fn scalar_weight(&self, i: usize) -> Result<i64> {
        self.require_rank_one()?;
        Ok(self.weight_of(i)[0])
    }

    pub(crate) fn require_rank_one(&self) -> Result<()> {
        if self.rank != 1 {
            return Err(Error::RankNotOne { rank: self.rank });
        }
        Ok(())
    }

    /// Weight data in basis order (inverse of [`decompose`]).
    pub fn to_weight_data(&self) -> WeightData {
        let weights = (0..self.dim()).map(|i| self.weight_of(i).to_vec()).collect();
        WeightData { rank: self.rank, weights }
    }
}

/// A maximal run `V_m ⊕ V_{m+1} ⊕ ⋯ ⊕ V_{m+ℓ}` of consecutive rank-1 weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub base: i64,
    /// `dims[i] = dim V_{base+i}`.
    pub dims: Vec<usize>,
    /// Indices into [`WeightDecomposition::blocks`], one per level.
    pub blocks: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub chains: Vec<Chain>,
}

impl ChainDecomposition {
    pub fn dim(&self) -> usize {
        self.chains.iter().map(Chain::dim).sum()
    }
}

/// Split the rank-1 blocks at every weight gap larger than one.
pub fn chains(d: &WeightDecomposition) -> Result<ChainDecomposition> {
    d.require_rank_one()?;
    let mut out: Vec<Chain> = Vec::new();
    for (b, block) in d.blocks.iter().enumerate() {
        let m = block.weight[0];
        match out.last_mut() {
            Some(ch) if ch.base + ch.len() as i64 == m => {
                ch.dims.push(block.dim());
                ch.blocks.push(b);
            }
            _ => out.push(Chain { base: m, dims: alloc::vec![block.dim()], blocks: alloc::vec![b] }),
        }
    }
    Ok(ChainDecomposition { chains: out })
}

/// `τ^m` for a unit-modulus `τ`; negative powers use the conjugate.
fn unit_pow(tau: C64, m: i64) -> C64 {
    let base = if m < 0 { tau.conj() } else { tau };
    let mut e = m.unsigned_abs();
    let mut acc = C64::new(1.0, 0.0);
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= sq;
        }
        sq *= sq;
        e >>= 1;
    }
    acc
}

/// Character `τ ↦ Π_k τ_k^{w[k]}`.
pub fn character(weight: &[i64], tau: &[C64]) -> C64 {
    weight.iter().zip(tau).map(|(&m, &t)| unit_pow(t, m)).product()
}

/// The diagonal unitary matrix `f(τ)`.
pub fn f_of(d: &WeightDecomposition, tau: &[C64]) -> Result<CMatrix> {
    if tau.len() != d.rank {
        return Err(Error::DimensionMismatch { expected: (d.rank, 1), found: (tau.len(), 1) });
    }
    for (index, t) in tau.iter().enumerate() {
        let modulus = t.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitModulus { index, modulus });
        }
    }
    let diag: Vec<C64> = (0..d.dim()).map(|i| character(d.weight_of(i), tau)).collect();
    Ok(CMatrix::diag(&diag))
}

/// Frobenius norm of the entries of `h` outside the weight blocks.
pub fn off_block_norm(d: &WeightDecomposition, h: &CMatrix) -> Result<f64> {
    let n = d.dim();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    let mut ssq = 0.0;
    for i in 0..n {
        for j in 0..n {
            if d.block_of[i] != d.block_of[j] {
                ssq += h[(i, j)].norm_sqr();
            }
        }
    }
    Ok(ssq.sqrt())
}

/// `h` is block-diagonal for the weight blocks up to `tol·‖h‖`, i.e. `h`
/// lies in the Lie algebra of the centralizer of `f`.
pub fn commutant_contains(d: &WeightDecomposition, h: &CMatrix, tol: f64) -> Result<bool> {
    Ok(off_block_norm(d, h)? <= tol * scale_of(h.norm()))
}

/// Complex dimension of the centralizer: `Σ (dim V_m)²`.
pub fn commutant_dim(d: &WeightDecomposition) -> usize {
    d.blocks.iter().map(|b| b.dim() * b.dim()).sum()
}

/// Largest condition number accepted by [`sample_commutant`].
pub const SAMPLE_MAX_COND: f64 = 1e6;

/// Deterministic invertible element of the centralizer: each weight block
/// is `I + R` with `R` uniform in the unit disk, resampled while the
/// condition number of the whole matrix exceeds [`SAMPLE_MAX_COND`].
pub fn sample_commutant(d: &WeightDecomposition, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let n = d.dim();
    loop {
        let mut h = CMatrix::zeros(n, n);
        for block in &d.blocks {
            for (a, &i) in block.indices.iter().enumerate() {
                for (b, &j) in block.indices.iter().enumerate() {
                    let shift = if a == b { 1.0 } else { 0.0 };
                    h[(i, j)] = disk(&mut rng) + shift;
                }
            }
        }
        if svd(&h).condition_number() <= SAMPLE_MAX_COND {
            return h;
        }
    }
}
