//! Binary decomposition of `M` and everything derived from it: partial sums,
//! rotation angles, the `(a_r, b_r)` coefficient pairs, and the block profile
//! of the prepared state.
//!
//! Writing `M = Σ_{r=0}^{k} 2^{l_r}` with `l_0 < … < l_k`, the prepared state is
//! a sum of `k + 1` flat blocks. Block `r` covers the `2^{l_r}` consecutive
//! basis states starting at `M − M_r`, where `M_r = Σ_{j≤r} 2^{l_j}`, and carries
//! the amplitude `γ_r`. With the default angles every `γ_r` equals `1/√M`.

use crate::{Error, Result};

/// Largest register the planner accepts. `M` is held in a `u64`.
pub const MAX_QUBITS: usize = 63;

/// Number of qubits needed to index `m` basis states, `⌈log₂ m⌉`.
pub fn qubits_for(m: u64) -> usize {
    debug_assert!(m >= 1);
    if m <= 1 {
        0
    } else {
        (u64::BITS - (m - 1).leading_zeros()) as usize
    }
}

/// The complete parameterization of the preparation circuit for one `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BitPlan {
    m: u64,
    n: usize,
    exponents: Vec<usize>,
    partial_sums: Vec<u64>,
    thetas: Vec<f64>,
}

impl BitPlan {
    /// Decompose `m`, placing the state on `n_override` qubits when given and on
    /// `⌈log₂ m⌉` qubits otherwise.
    pub fn new(m: u64, n_override: Option<usize>) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("m must be at least 2, got {m}")));
        }
        let needed = qubits_for(m);
        let n = match n_override {
            Some(n) if n < needed => {
                return Err(Error::capacity(format!(
                    "m = {m} needs {needed} qubits but only {n} were requested"
                )))
            }
            Some(n) => n,
            None => needed,
        };
        if n > MAX_QUBITS {
            return Err(Error::capacity(format!(
                "{n} qubits exceeds the supported maximum of {MAX_QUBITS}"
            )));
        }

        let mut exponents = Vec::with_capacity(m.count_ones() as usize);
        let mut rest = m;
        while rest != 0 {
            exponents.push(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }

        let partial_sums: Vec<u64> = exponents
            .iter()
            .scan(0u64, |acc, &l| {
                *acc += 1u64 << l;
                Some(*acc)
            })
            .collect();

        let k = exponents.len() - 1;
        let thetas = (0..k)
            .map(|r| {
                let remaining = m - prev_sum(&partial_sums, r);
                let block = 1u64 << exponents[r];
                // remaining > block because blocks r+1..=k are still ahead.
                assert!(remaining > block, "degenerate rotation at r = {r} for m = {m}");
                -2.0 * (block as f64 / remaining as f64).sqrt().acos()
            })
            .collect();

        Ok(Self { m, n, exponents, partial_sums, thetas })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Register width.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Set-bit positions `l_0 < l_1 < … < l_k`.
    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// `M_0, …, M_k`; the last entry equals `m`.
    pub fn partial_sums(&self) -> &[u64] {
        &self.partial_sums
    }

    /// Rotation angles `θ_0, …, θ_{k−1}` in radians, each in `(−π, 0)`.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Index of the highest set bit in the exponent list, i.e. popcount − 1.
    pub fn k(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn l0(&self) -> usize {
        self.exponents[0]
    }

    pub fn lk(&self) -> usize {
        self.exponents[self.k()]
    }

    pub fn is_power_of_two(&self) -> bool {
        self.exponents.len() == 1
    }

    /// `M_{r−1}` with the convention `M_{−1} = 0`.
    pub fn sum_before(&self, r: usize) -> u64 {
        prev_sum(&self.partial_sums, r)
    }

    /// The basis-state range `[M − M_r, M − M_r + 2^{l_r})` of block `r`.
    pub fn block(&self, r: usize) -> std::ops::Range<u64> {
        let start = self.m - self.partial_sums[r];
        start..start + (1u64 << self.exponents[r])
    }
}

fn prev_sum(partial_sums: &[u64], r: usize) -> u64 {
    if r == 0 {
        0
    } else {
        partial_sums[r - 1]
    }
}

/// Shorthand for [`BitPlan::new`].
pub fn decompose(m: u64, n_override: Option<usize>) -> Result<BitPlan> {
    BitPlan::new(m, n_override)
}

/// Amplitudes `(a, b)` produced by a Y rotation acting on `|1⟩`:
/// `R_Y(θ)|1⟩ = a|0⟩ + b|1⟩` with `a = −sin(θ/2)` and `b = cos(θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPair {
    pub a: f64,
    pub b: f64,
}

impl CoefficientPair {
    /// Normalization slack accepted by [`CoefficientPair::new`].
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(a: f64, b: f64) -> Result<Self> {
        let pair = Self { a, b };
        if !a.is_finite() || !b.is_finite() || (a * a + b * b - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::invalid(format!("coefficient pair ({a}, {b}) is not normalized")));
        }
        Ok(pair)
    }

    pub fn from_angle(theta: f64) -> Self {
        let half = theta / 2.0;
        Self { a: -half.sin(), b: half.cos() }
    }

    /// Inverse of [`CoefficientPair::from_angle`]. For `a, b ≥ 0` this is
    /// `θ = −2·arccos(b)`, which lies in `[−π, 0]`.
    pub fn angle(&self) -> f64 {
        2.0 * (-self.a).atan2(self.b)
    }
}

/// `(a_r, b_r)` for `r = 0..k` that make every block amplitude equal to `1/√M`.
/// Empty for a power of two.
pub fn coefficients(plan: &BitPlan) -> Vec<CoefficientPair> {
    let m = plan.m();
    (0..plan.k())
        .map(|r| {
            let remaining = (m - plan.sum_before(r)) as f64;
            let after = (m - plan.partial_sums()[r]) as f64;
            let block = (1u64 << plan.exponents()[r]) as f64;
            CoefficientPair { a: (after / remaining).sqrt(), b: (block / remaining).sqrt() }
        })
        .collect()
}

/// One flat block of the prepared state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub gamma: f64,
    pub start: u64,
    pub len: u64,
}

impl Block {
    pub fn contains(&self, index: u64) -> bool {
        index >= self.start && index - self.start < self.len
    }
}

/// Predicted output state as a list of flat blocks, ordered by `r`
/// (so by descending basis index).
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProfile {
    blocks: Vec<Block>,
}

impl AmplitudeProfile {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Amplitude of basis state `index`; zero outside every block.
    pub fn amplitude(&self, index: u64) -> f64 {
        self.blocks
            .iter()
            .find(|b| b.contains(index))
            .map_or(0.0, |b| b.gamma)
    }

    /// Dense real amplitude vector over `2^n` basis states.
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << n];
        for block in &self.blocks {
            let start = block.start as usize;
            out[start..start + block.len as usize].fill(block.gamma);
        }
        out
    }

    /// `Σ_r γ_r² · 2^{l_r}`.
    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.gamma * b.gamma * b.len as f64).sum()
    }
}

/// Block amplitudes `γ_r` for the given coefficient pairs (the default uniform
/// pairs when `overrides` is `None`).
///
/// `γ_0 = b_0/√2^{l_0}`, `γ_r = a_0⋯a_{r−1}·b_r/√2^{l_r}` for `0 < r < k`, and
/// `γ_k = a_0⋯a_{k−1}/√2^{l_k}`.
pub fn predict_amplitudes(
    plan: &BitPlan,
    overrides: Option<&[CoefficientPair]>,
) -> Result<AmplitudeProfile> {
    let k = plan.k();
    let pairs = match overrides {
        Some(pairs) => {
            if pairs.len() != k {
                return Err(Error::invalid(format!(
                    "expected {k} coefficient pairs for m = {}, got {}",
                    plan.m(),
                    pairs.len()
                )));
            }
            for p in pairs {
                CoefficientPair::new(p.a, p.b)?;
            }
            pairs.to_vec()
        }
        None => coefficients(plan),
    };

    let mut blocks = Vec::with_capacity(k + 1);
    let mut prefix = 1.0;
    for r in 0..=k {
        let pair = pairs.get(r);
        let weight = pair.map_or(prefix, |p| prefix * p.b);
        let range = plan.block(r);
        let len = range.end - range.start;
        blocks.push(Block { gamma: weight / (len as f64).sqrt(), start: range.start, len });
        if let Some(p) = pair {
            prefix *= p.a;
        }
    }
    Ok(AmplitudeProfile { blocks })
}
