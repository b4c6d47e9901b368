//! Empirical ψ-power bias, ψ-rising-factorial bias and the fixed-point
//! residual `L(X) = L(V_w X^{(ψ)})`, `V_w ~ Beta(w, 1)`.
//!
//! Biasing is done by weighted resampling of a batch: draw `K ~ ψ`, then pick
//! a batch element with probability proportional to `x^K` (or the rising
//! factorial `x (x+1) ... (x+K−1)`).

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{PolyaError, Result};
use crate::rng::{derive_seed, map_streams};
use crate::special::lgamma;
use crate::stats::{empirical_moments, ks_two_sample};

pub use crate::ul::PsiDistribution as PsiSpec;

const CHUNK: usize = 4096;
/// Components of ψ that must pass the degeneracy check: those jointly
/// carrying this much mass.
pub const CHECKED_MASS: f64 = 0.99;
/// Largest weight share tolerated for a checked component.
pub const MAX_WEIGHT_SHARE: f64 = 0.5;

/// i.i.d. positive values tagged with their seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub label: String,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>, seed: u64, label: &str) -> Result<Self> {
        if let Some(bad) = values.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
            return Err(PolyaError::InvalidParameter(format!("batch value {bad} is not finite and positive")));
        }
        Ok(Self { values, seed, label: label.to_string() })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multiply every value by `theta > 0`.
    pub fn scaled(&self, theta: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|x| x * theta).collect(), self.seed, &self.label)
    }
}

/// Cumulative weights over the batch sorted in decreasing order, truncated
/// once the remaining mass is below `1e-17` of the total.
struct WeightTable {
    cumulative: Vec<f64>,
}

impl WeightTable {
    fn build(sorted_desc: &[f64], log_weight: &impl Fn(f64) -> f64) -> (Self, f64) {
        let top = log_weight(sorted_desc[0]);
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        let mut max_share: f64 = 0.0;
        let n = sorted_desc.len();
        for (i, &x) in sorted_desc.iter().enumerate() {
            let w = (log_weight(x) - top).exp();
            total += w;
            cumulative.push(total);
            max_share = max_share.max(w);
            if (n - i - 1) as f64 * w < 1e-17 * total {
                break;
            }
        }
        (Self { cumulative }, max_share / total)
    }

    fn pick(&self, u: f64) -> usize {
        let target = u * self.cumulative.last().expect("non-empty");
        self.cumulative.partition_point(|&c| c <= target).min(self.cumulative.len() - 1)
    }
}

fn biased_resample(
    batch: &SampleBatch,
    psi: &PsiSpec,
    count: usize,
    seed: u64,
    label: &str,
    log_weight: impl Fn(f64, usize) -> f64 + Sync,
) -> Result<SampleBatch> {
    if batch.is_empty() {
        return Err(PolyaError::EmptyBatch);
    }
    let mut sorted = batch.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let checked: Vec<usize> = psi.support_for_mass(CHECKED_MASS);
    // pass 1: the (K, u) pairs, one stream per chunk
    let chunks = count.div_ceil(CHUNK);
    let draws: Vec<(usize, f64)> = map_streams(seed, chunks, |i, rng| {
        let len = CHUNK.min(count - i as usize * CHUNK);
        (0..len).map(|_| (psi.sample(rng), rng.random::<f64>())).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    // pass 2: one table per distinct K, built once
    let mut by_k: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(k, _)) in draws.iter().enumerate() {
        by_k.entry(k).or_default().push(i);
    }
    for &k in &checked {
        by_k.entry(k).or_default();
    }
    let mut out = vec![0.0; count];
    for (k, idx) in by_k {
        let (table, share) = WeightTable::build(&sorted, &|x| log_weight(x, k));
        if share > MAX_WEIGHT_SHARE && checked.contains(&k) {
            return Err(PolyaError::DegenerateWeights { power: k as u32, share });
        }
        for i in idx {
            out[i] = sorted[table.pick(draws[i].1)];
        }
    }
    SampleBatch::new(out, seed, label)
}

/// `count` draws of the empirical ψ-power-biased law of `batch`.
///
/// Errors with `DegenerateWeights` if, for some `K` among the components
/// carrying 99% of ψ, one batch point holds more than half of the `x^K`
/// weight and the batch size is above one.
pub fn power_bias_sample(batch: &SampleBatch, psi: &PsiSpec, count: usize, seed: u64) -> Result<SampleBatch> {
    let label = format!("{}-power-bias", batch.label);
    guard_constant(batch, count, seed, &label)
        .unwrap_or_else(|| biased_resample(batch, psi, count, seed, &label, |x, k| k as f64 * x.ln()))
}

/// As [`power_bias_sample`] with rising-factorial weights; values must be
/// positive integers.
pub fn rising_factorial_bias_sample(
    batch: &SampleBatch,
    psi: &PsiSpec,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if let Some(bad) = batch.values.iter().find(|x| x.fract() != 0.0) {
        return Err(PolyaError::InvalidParameter(format!("rising-factorial bias needs integers, got {bad}")));
    }
    let label = format!("{}-rising-bias", batch.label);
    guard_constant(batch, count, seed, &label)
        .unwrap_or_else(|| biased_resample(batch, psi, count, seed, &label, |x, k| lgamma(x + k as f64) - lgamma(x)))
}

// A constant batch is its own bias, whatever the weights.
fn guard_constant(batch: &SampleBatch, count: usize, seed: u64, label: &str) -> Option<Result<SampleBatch>> {
    let first = *batch.values.first()?;
    if batch.values.iter().all(|&x| x == first) {
        Some(SampleBatch::new(vec![first; count], seed, label))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub se: f64,
}

/// Two-sample comparison of a batch with its transform `V_w X^{(ψ)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub ks: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
    pub moment_table: Vec<MomentComparison>,
}

/// Build `V_w · X^{(ψ)}` with `V_w = U^{1/w}` from `batch` and compare it
/// with the batch itself (same size).
pub fn fixed_point_residual(batch: &SampleBatch, w: f64, psi: &PsiSpec, seed: u64) -> Result<FixedPointReport> {
    if !(w > 0.0) {
        return Err(PolyaError::InvalidParameter(format!("w must be positive, got {w}")));
    }
    let n = batch.len();
    let biased = power_bias_sample(batch, psi, n, derive_seed(seed, "bias"))?;
    let v_seed = derive_seed(seed, "beta");
    let factors: Vec<f64> = map_streams(v_seed, n.div_ceil(CHUNK), |i, rng| {
        let len = CHUNK.min(n - i as usize * CHUNK);
        (0..len).map(|_| (1.0 - rng.random::<f64>()).powf(1.0 / w)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let transformed: Vec<f64> = biased.values.iter().zip(&factors).map(|(x, v)| x * v).collect();
    let (ks, p_value) = ks_two_sample(&batch.values, &transformed)?;
    let lhs = empirical_moments(&batch.values, 4)?;
    let rhs = empirical_moments(&transformed, 4)?;
    let moment_table = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| MomentComparison { k: l.k, lhs: l.mean, rhs: r.mean, se: l.se.hypot(r.se) })
        .collect();
    Ok(FixedPointReport { ks, p_value, n1: n, n2: transformed.len(), moment_table })
}
