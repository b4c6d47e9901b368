//! Inter-arrival laws for the immigration times and the arrival sequences they
//! generate.
//!
//! An [`InterArrivalSpec`] is a validated law on `{0, 1, 2, ...}` with
//! `π_0 < 1`. Arrival times are the partial sums `T_j = τ_1 + ... + τ_j` and
//! `N_j = #{i : T_i <= j}` counts the arrivals up to and including draw `j`.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{PolyaError, Result};
use crate::special::{lgamma, ln_gamma_ratio};

/// JSON-facing description of an inter-arrival law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InterArrivalDescriptor {
    Deterministic { k: u64 },
    Finite { probs: Vec<(u64, f64)> },
    Geometric { p: f64, support_start: u64 },
    Powerlaw { alpha: f64, beta: f64, w: u64 },
}

/// Mean of an inter-arrival law; `Infinite` is kept distinct from any float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mean {
    Finite(f64),
    Infinite,
}

impl Mean {
    /// The scaling exponent `μ/(μ+1)`, equal to 1 when `μ = ∞`.
    pub fn scaling_exponent(self) -> f64 {
        match self {
            Mean::Finite(mu) => mu / (mu + 1.0),
            Mean::Infinite => 1.0,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Mean::Finite(mu) => Some(mu),
            Mean::Infinite => None,
        }
    }
}

// Survival probabilities below this are folded into the cutoff index.
const POWER_LAW_CUTOFF: f64 = 1e-12;
const POWER_LAW_TABLE: usize = 256;

#[derive(Debug, Clone)]
pub struct PowerLaw {
    alpha: f64,
    beta: f64,
    w: f64,
    /// `ln Γ(w+s+1) − ln Γ(w+1)` with `s = wβ`.
    log_front: f64,
    /// `S(j) = P(τ >= j)` for `j < POWER_LAW_TABLE`.
    survival_table: Vec<f64>,
    cutoff: u64,
}

impl PowerLaw {
    pub fn new(alpha: f64, beta: f64, w: f64) -> Self {
        let s = w * beta;
        let log_front = lgamma(w + s + 1.0) - lgamma(w + 1.0);
        let mut law = Self { alpha, beta, w, log_front, survival_table: Vec::new(), cutoff: 0 };
        law.survival_table = (0..POWER_LAW_TABLE as u64).map(|j| law.survival_exact(j)).collect();
        // smallest j with S(j) < cutoff
        let (mut lo, mut hi) = (0u64, 1u64);
        while law.survival_exact(hi) >= POWER_LAW_CUTOFF {
            lo = hi;
            hi = hi.saturating_mul(2);
            if hi >= u64::MAX / 4 {
                break;
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if law.survival_exact(mid) >= POWER_LAW_CUTOFF {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        law.cutoff = hi;
        law
    }

    fn s(&self) -> f64 {
        self.w * self.beta
    }

    /// `P(τ >= j) = Γ(w+s+1) Γ(j+w+1) / (Γ(w+1) Γ(j+w+s+1))`.
    fn survival_exact(&self, j: u64) -> f64 {
        (self.log_front - ln_gamma_ratio(j as f64 + self.w + 1.0, self.s())).exp()
    }

    pub fn survival(&self, j: u64) -> f64 {
        match self.survival_table.get(j as usize) {
            Some(&v) => v,
            None => self.survival_exact(j),
        }
    }

    pub fn pmf(&self, j: u64) -> f64 {
        let w = self.w;
        let s = self.s();
        let log = self.beta.ln() + lgamma(w + s + 1.0) - lgamma(w) - ln_gamma_ratio(w + j as f64 + 1.0, s + 1.0);
        log.exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // u in (0, 1]; τ = j exactly when S(j+1) < u <= S(j)
        let u = 1.0 - rng.random::<f64>();
        if u < POWER_LAW_CUTOFF {
            return self.cutoff;
        }
        let last = (POWER_LAW_TABLE - 1) as u64;
        let (mut lo, mut hi) = if u > self.survival(last) {
            (0u64, last)
        } else {
            let mut lo = last;
            let mut hi = last * 2;
            while self.survival(hi) >= u {
                lo = hi;
                hi = hi.saturating_mul(2).min(self.cutoff);
                if lo == hi {
                    return self.cutoff;
                }
            }
            (lo, hi)
        };
        // invariant: S(lo) >= u > S(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[derive(Debug, Clone)]
enum Law {
    Deterministic(u64),
    /// `thresholds[i] = 2^64 · P(τ <= values[i])` for all but the last atom.
    /// The `positive_*` fields describe the law conditioned on `τ > 0`.
    Finite {
        values: Vec<u64>,
        probs: Vec<f64>,
        thresholds: Vec<u64>,
        log_pi0: f64,
        positive_values: Vec<u64>,
        positive_thresholds: Vec<u64>,
    },
    Geometric {
        p: f64,
        start: u64,
        sampler: Option<Geometric>,
    },
    PowerLaw(PowerLaw),
}

/// A validated inter-arrival law on the non-negative integers with `π_0 < 1`.
#[derive(Debug, Clone)]
pub struct InterArrivalSpec {
    descriptor: InterArrivalDescriptor,
    law: Law,
}

// `2^64 · P(index <= i)` for every index but the last.
fn thresholds_for(probs: &[f64]) -> Vec<u64> {
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    probs[..probs.len() - 1]
        .iter()
        .map(|p| {
            acc += p;
            (acc / total * 18_446_744_073_709_551_616.0) as u64
        })
        .collect()
}

#[inline]
fn pick(thresholds: &[u64], x: u64) -> usize {
    // branch-free search; supports are small
    thresholds.iter().map(|&t| usize::from(x >= t)).sum()
}

// Number of leading zero gaps, P(Z >= k) = π_0^k.
#[inline]
fn zero_run<R: Rng + ?Sized>(log_pi0: f64, rng: &mut R) -> u64 {
    if log_pi0 == f64::NEG_INFINITY {
        return 0;
    }
    let u = 1.0 - rng.random::<f64>();
    (u.ln() / log_pi0) as u64
}

/// Validate a descriptor into a usable law.
pub fn make_interarrival(descriptor: &InterArrivalDescriptor) -> Result<InterArrivalSpec> {
    let law = match descriptor {
        InterArrivalDescriptor::Deterministic { k } => {
            if *k == 0 {
                return Err(PolyaError::Degenerate);
            }
            Law::Deterministic(*k)
        }
        InterArrivalDescriptor::Finite { probs } => {
            if probs.is_empty() {
                return Err(PolyaError::Normalization("empty support".into()));
            }
            let mut atoms: Vec<(u64, f64)> = Vec::new();
            for &(v, p) in probs {
                if !(p >= 0.0) || !p.is_finite() {
                    return Err(PolyaError::Normalization(format!("negative probability {p} at {v}")));
                }
                match atoms.iter_mut().find(|(u, _)| *u == v) {
                    Some(a) => a.1 += p,
                    None => atoms.push((v, p)),
                }
            }
            atoms.retain(|&(_, p)| p > 0.0);
            atoms.sort_by_key(|&(v, _)| v);
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(PolyaError::Normalization(format!("probabilities sum to {total}")));
            }
            if atoms.len() == 1 && atoms[0].0 == 0 {
                return Err(PolyaError::Degenerate);
            }
            let values: Vec<u64> = atoms.iter().map(|a| a.0).collect();
            let probs: Vec<f64> = atoms.iter().map(|a| a.1).collect();
            let thresholds = thresholds_for(&probs);
            let pi0 = if values[0] == 0 { probs[0] } else { 0.0 };
            let skip = usize::from(values[0] == 0);
            let positive_values = values[skip..].to_vec();
            let positive_thresholds = thresholds_for(&probs[skip..]);
            Law::Finite { values, probs, thresholds, log_pi0: pi0.ln(), positive_values, positive_thresholds }
        }
        InterArrivalDescriptor::Geometric { p, support_start } => {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(PolyaError::InvalidParameter(format!("geometric p must lie in (0,1], got {p}")));
            }
            if *support_start > 1 {
                return Err(PolyaError::InvalidParameter("support_start must be 0 or 1".into()));
            }
            if *support_start == 0 && *p == 1.0 {
                return Err(PolyaError::Degenerate);
            }
            let sampler = if *p < 1.0 { Some(Geometric::new(*p).expect("p in (0,1)")) } else { None };
            Law::Geometric { p: *p, start: *support_start, sampler }
        }
        InterArrivalDescriptor::Powerlaw { alpha, beta, w } => {
            if !(*alpha > 0.0) || !(*beta > 0.0) || *w == 0 {
                return Err(PolyaError::InvalidParameter("power law needs alpha, beta > 0 and w >= 1".into()));
            }
            Law::PowerLaw(PowerLaw::new(*alpha, *beta, *w as f64))
        }
    };
    Ok(InterArrivalSpec { descriptor: descriptor.clone(), law })
}

impl InterArrivalSpec {
    pub fn deterministic(k: u64) -> Result<Self> {
        make_interarrival(&InterArrivalDescriptor::Deterministic { k })
    }

    pub fn finite(probs: &[(u64, f64)]) -> Result<Self> {
        make_interarrival(&InterArrivalDescriptor::Finite { probs: probs.to_vec() })
    }

    pub fn geometric(p: f64, support_start: u64) -> Result<Self> {
        make_interarrival(&InterArrivalDescriptor::Geometric { p, support_start })
    }

    pub fn power_law(alpha: f64, beta: f64, w: u64) -> Result<Self> {
        make_interarrival(&InterArrivalDescriptor::Powerlaw { alpha, beta, w })
    }

    pub fn descriptor(&self) -> &InterArrivalDescriptor {
        &self.descriptor
    }

    /// `π_j`.
    pub fn pmf(&self, j: u64) -> f64 {
        match &self.law {
            Law::Deterministic(k) => f64::from(u8::from(j == *k)),
            Law::Finite { values, probs, .. } => values.iter().position(|&v| v == j).map_or(0.0, |i| probs[i]),
            Law::Geometric { p, start, .. } => {
                if j < *start {
                    0.0
                } else {
                    p * (1.0 - p).powf((j - start) as f64)
                }
            }
            Law::PowerLaw(pl) => pl.pmf(j),
        }
    }

    pub fn pi0(&self) -> f64 {
        self.pmf(0)
    }

    /// `P(τ >= j)` where a closed form exists (power law, geometric, finite laws).
    pub fn survival(&self, j: u64) -> f64 {
        match &self.law {
            Law::Deterministic(k) => f64::from(u8::from(j <= *k)),
            Law::Finite { values, probs, .. } => {
                values.iter().zip(probs).filter(|(v, _)| **v >= j).map(|(_, p)| p).sum()
            }
            Law::Geometric { p, start, .. } => {
                if j <= *start {
                    1.0
                } else {
                    (1.0 - p).powf((j - start) as f64)
                }
            }
            Law::PowerLaw(pl) => pl.survival(j),
        }
    }

    /// Atoms `(value, probability)` when the support is finite.
    pub fn atoms(&self) -> Option<Vec<(u64, f64)>> {
        match &self.law {
            Law::Deterministic(k) => Some(vec![(*k, 1.0)]),
            Law::Finite { values, probs, .. } => Some(values.iter().copied().zip(probs.iter().copied()).collect()),
            _ => None,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.law, Law::Deterministic(_))
    }

    /// Exact mean `μ`, possibly infinite.
    pub fn mean(&self) -> Mean {
        match &self.law {
            Law::Deterministic(k) => Mean::Finite(*k as f64),
            Law::Finite { values, probs, .. } => {
                Mean::Finite(values.iter().zip(probs).map(|(v, p)| *v as f64 * p).sum())
            }
            Law::Geometric { p, start, .. } => Mean::Finite(*start as f64 + (1.0 - p) / p),
            Law::PowerLaw(pl) => {
                let s = pl.s();
                if s > 1.0 {
                    Mean::Finite((pl.w + 1.0) / (s - 1.0))
                } else {
                    Mean::Infinite
                }
            }
        }
    }

    /// Parameters `(alpha, beta, w)` of a power-law spec.
    pub fn power_law_params(&self) -> Option<(f64, f64, f64)> {
        match &self.law {
            Law::PowerLaw(pl) => Some((pl.alpha, pl.beta, pl.w)),
            _ => None,
        }
    }

    /// Index returned for draws beyond the power-law cutoff.
    pub fn power_law_cutoff(&self) -> Option<u64> {
        match &self.law {
            Law::PowerLaw(pl) => Some(pl.cutoff),
            _ => None,
        }
    }

    /// One draw of `τ`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.law {
            Law::Deterministic(k) => *k,
            Law::Finite { values, thresholds, .. } => values[pick(thresholds, rng.next_u64())],
            Law::Geometric { start, sampler, .. } => start + sampler.as_ref().map_or(0, |g| g.sample(rng)),
            Law::PowerLaw(pl) => pl.sample(rng),
        }
    }

    /// A run of zero gaps followed by the next positive gap, as
    /// `(zeros, gap)`. Same law as drawing gaps one at a time until a positive
    /// one appears, with fewer random numbers.
    #[inline]
    pub fn sample_run<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        match &self.law {
            Law::Deterministic(k) => (0, *k),
            Law::Finite { log_pi0, positive_values, positive_thresholds, .. } => {
                let zeros = zero_run(*log_pi0, rng);
                let idx = if positive_thresholds.is_empty() { 0 } else { pick(positive_thresholds, rng.next_u64()) };
                (zeros, positive_values[idx])
            }
            Law::Geometric { p, start, sampler } => {
                // memoryless: given τ >= 1, τ − 1 is again Geometric from 0
                let zeros = if *start == 0 { zero_run(p.ln(), rng) } else { 0 };
                (zeros, 1 + sampler.as_ref().map_or(0, |g| g.sample(rng)))
            }
            Law::PowerLaw(pl) => {
                let mut zeros = 0;
                loop {
                    let g = pl.sample(rng);
                    if g > 0 {
                        return (zeros, g);
                    }
                    zeros += 1;
                }
            }
        }
    }
}

/// A realised arrival sequence observed up to a horizon `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalSequence {
    /// The inter-arrival gaps, up to and including the first with `T > n`.
    pub taus: Vec<u64>,
    /// Partial sums `T_1, T_2, ...` matching `taus`.
    pub times: Vec<u64>,
    /// `N_j` for `j = 0..=n`.
    pub counts: Vec<u64>,
}

impl ArrivalSequence {
    /// Build from explicit gaps; `counts` covers `0..=horizon`.
    pub fn from_taus(taus: &[u64], horizon: u64) -> Self {
        let mut times = Vec::with_capacity(taus.len());
        let mut t = 0u64;
        for &tau in taus {
            t += tau;
            times.push(t);
        }
        let mut counts = vec![0u64; horizon as usize + 1];
        for &ti in &times {
            if ti <= horizon {
                counts[ti as usize] += 1;
            }
        }
        for j in 1..counts.len() {
            counts[j] += counts[j - 1];
        }
        Self { taus: taus.to_vec(), times, counts }
    }

    pub fn horizon(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// `N_j`; panics beyond the horizon.
    pub fn count(&self, j: u64) -> u64 {
        self.counts[j as usize]
    }

    /// Number of arrivals exactly at time `j`.
    pub fn arrivals_at(&self, j: u64) -> u64 {
        let j = j as usize;
        if j == 0 {
            self.counts[0]
        } else {
            self.counts[j] - self.counts[j - 1]
        }
    }
}

/// Sample gaps until the arrival time exceeds `n`.
pub fn sample_arrivals<R: Rng + ?Sized>(spec: &InterArrivalSpec, n: u64, rng: &mut R) -> ArrivalSequence {
    let mut taus = Vec::new();
    let mut t = 0u64;
    loop {
        let tau = spec.sample(rng);
        taus.push(tau);
        t = t.saturating_add(tau);
        if t > n {
            break;
        }
    }
    ArrivalSequence::from_taus(&taus, n)
}

/// Streaming arrival process: reports how many arrivals fall on each step
/// without storing the sequence. Must be queried at `t = 0, 1, 2, ...` in order.
#[derive(Debug, Clone)]
pub struct ArrivalClock<'a> {
    spec: &'a InterArrivalSpec,
    next: u64,
}

impl<'a> ArrivalClock<'a> {
    pub fn new<R: Rng + ?Sized>(spec: &'a InterArrivalSpec, rng: &mut R) -> Self {
        let next = spec.sample(rng);
        Self { spec, next }
    }

    /// Number of arrivals with `T_i = t`; consecutive zero gaps batch together.
    #[inline]
    pub fn arrivals_at<R: Rng + ?Sized>(&mut self, t: u64, rng: &mut R) -> u64 {
        let mut count = 0;
        while self.next == t {
            count += 1;
            self.next = self.next.saturating_add(self.spec.sample(rng));
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn constructors_and_means() {
        let d1 = InterArrivalSpec::deterministic(1).unwrap();
        assert_eq!(d1.mean(), Mean::Finite(1.0));
        assert_eq!(InterArrivalSpec::deterministic(3).unwrap().mean(), Mean::Finite(3.0));
        let two = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)]).unwrap();
        assert_eq!(two.mean(), Mean::Finite(0.5));
        assert_eq!(InterArrivalSpec::power_law(1.0, 2.0, 1).unwrap().mean(), Mean::Finite(2.0));
        assert_eq!(InterArrivalSpec::power_law(1.0, 1.0, 1).unwrap().mean(), Mean::Infinite);
        assert_eq!(InterArrivalSpec::geometric(0.5, 1).unwrap().mean(), Mean::Finite(2.0));
        assert_eq!(InterArrivalSpec::geometric(0.25, 0).unwrap().mean(), Mean::Finite(3.0));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(InterArrivalSpec::deterministic(0).unwrap_err(), PolyaError::Degenerate);
        assert_eq!(InterArrivalSpec::finite(&[(0, 1.0)]).unwrap_err(), PolyaError::Degenerate);
        assert!(matches!(InterArrivalSpec::finite(&[(1, 0.5), (2, 0.4)]), Err(PolyaError::Normalization(_))));
        assert!(matches!(InterArrivalSpec::finite(&[(1, 1.5), (2, -0.5)]), Err(PolyaError::Normalization(_))));
        assert_eq!(InterArrivalSpec::geometric(1.0, 0).unwrap_err(), PolyaError::Degenerate);
        assert!(InterArrivalSpec::geometric(0.0, 1).is_err());
        assert!(InterArrivalSpec::power_law(1.0, 0.0, 1).is_err());
    }

    #[test]
    fn power_law_pmf_closed_form() {
        // α = β = w = 1 gives π_j = 2 / ((j+2)(j+3))
        let spec = InterArrivalSpec::power_law(1.0, 1.0, 1).unwrap();
        for j in 0..50u64 {
            let want = 2.0 / (((j + 2) * (j + 3)) as f64);
            assert!((spec.pmf(j) - want).abs() < 1e-12 * want, "j={j}");
        }
    }

    #[test]
    fn power_law_partial_sum_plus_tail_is_one() {
        for &(beta, w) in &[(1.0, 1u64), (2.0, 1), (0.3, 2), (0.7, 3), (5.0, 2)] {
            let spec = InterArrivalSpec::power_law(1.0, beta, w).unwrap();
            for &cut in &[10u64, 1000, 20000] {
                let partial: f64 = (0..cut).map(|j| spec.pmf(j)).sum();
                let total = partial + spec.survival(cut);
                assert!((total - 1.0).abs() < 1e-10, "beta={beta} w={w} cut={cut} total={total}");
            }
        }
    }

    #[test]
    fn power_law_mean_matches_series() {
        // μ = Σ_{j>=1} S(j) = (w+1)/(wβ-1)
        let spec = InterArrivalSpec::power_law(1.0, 3.0, 2).unwrap();
        let series: f64 = (1..200_000u64).map(|j| spec.survival(j)).sum();
        let mu = spec.mean().finite().unwrap();
        assert!((mu - 3.0 / 5.0).abs() < 1e-12);
        assert!((series - mu).abs() < 1e-6, "{series}");
    }

    #[test]
    fn deterministic_arrivals() {
        let mut rng = stream(1, 0);
        let d1 = InterArrivalSpec::deterministic(1).unwrap();
        let seq = sample_arrivals(&d1, 4, &mut rng);
        assert_eq!(&seq.times[..4], &[1, 2, 3, 4]);
        assert_eq!(seq.counts, vec![0, 1, 2, 3, 4]);
        let d2 = InterArrivalSpec::deterministic(2).unwrap();
        let seq = sample_arrivals(&d2, 5, &mut rng);
        assert_eq!(seq.counts, (0..=5u64).map(|j| j / 2).collect::<Vec<_>>());
    }

    #[test]
    fn worked_example_sequence() {
        let seq = ArrivalSequence::from_taus(&[1, 3, 0, 0, 4], 8);
        assert_eq!(seq.times, vec![1, 4, 4, 4, 8]);
        assert_eq!(seq.counts, vec![0, 1, 1, 1, 4, 4, 4, 4, 5]);
        assert_eq!(seq.arrivals_at(4), 3);
    }

    #[test]
    fn clock_matches_stored_sequence() {
        let spec = InterArrivalSpec::finite(&[(0, 0.3), (1, 0.3), (3, 0.4)]).unwrap();
        let n = 200;
        let seq = sample_arrivals(&spec, n, &mut stream(9, 2));
        let mut rng = stream(9, 2);
        let mut clock = ArrivalClock::new(&spec, &mut rng);
        for t in 0..=n {
            assert_eq!(clock.arrivals_at(t, &mut rng), seq.arrivals_at(t), "t={t}");
        }
    }

    #[test]
    fn empirical_means_within_four_standard_errors() {
        let specs = [
            InterArrivalSpec::finite(&[(0, 0.5), (1, 0.2), (4, 0.3)]).unwrap(),
            InterArrivalSpec::geometric(0.3, 1).unwrap(),
            InterArrivalSpec::geometric(0.6, 0).unwrap(),
            InterArrivalSpec::power_law(1.0, 4.0, 1).unwrap(),
        ];
        let m = 1_000_000;
        for (i, spec) in specs.iter().enumerate() {
            let mut rng = stream(3, i as u64);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..m {
                let x = spec.sample(&mut rng) as f64;
                s += x;
                s2 += x * x;
            }
            let mean = s / m as f64;
            let sd = (s2 / m as f64 - mean * mean).sqrt();
            let mu = spec.mean().finite().unwrap();
            assert!((mean - mu).abs() < 4.0 * sd / (m as f64).sqrt(), "spec {i}: {mean} vs {mu}");
        }
    }

    #[test]
    fn power_law_sampler_matches_pmf() {
        let spec = InterArrivalSpec::power_law(1.0, 1.0, 1).unwrap();
        let mut rng = stream(5, 0);
        let m = 200_000;
        let mut hist = [0usize; 4];
        let mut beyond = 0usize;
        for _ in 0..m {
            let t = spec.sample(&mut rng);
            if t < 4 {
                hist[t as usize] += 1;
            } else if t > 300 {
                beyond += 1;
            }
        }
        for (j, &count) in hist.iter().enumerate().take(4) {
            let p = spec.pmf(j as u64);
            let se = (p * (1.0 - p) / m as f64).sqrt();
            assert!((count as f64 / m as f64 - p).abs() < 4.0 * se, "j={j}");
        }
        let p = spec.survival(301);
        let se = (p * (1.0 - p) / m as f64).sqrt();
        assert!((beyond as f64 / m as f64 - p).abs() < 4.0 * se);
    }

    #[test]
    fn descriptor_json_shape() {
        let d: InterArrivalDescriptor =
            serde_json::from_str(r#"{"kind":"powerlaw","alpha":1.0,"beta":1.0,"w":1}"#).unwrap();
        assert_eq!(d, InterArrivalDescriptor::Powerlaw { alpha: 1.0, beta: 1.0, w: 1 });
        let g: InterArrivalDescriptor =
            serde_json::from_str(r#"{"kind":"geometric","p":0.5,"support_start":1}"#).unwrap();
        assert!(make_interarrival(&g).is_ok());
    }

    #[test]
    fn runs_match_gap_by_gap_law() {
        let specs = [
            InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)]).unwrap(),
            InterArrivalSpec::finite(&[(0, 0.2), (2, 0.3), (5, 0.5)]).unwrap(),
            InterArrivalSpec::geometric(0.4, 0).unwrap(),
            InterArrivalSpec::power_law(1.0, 1.0, 1).unwrap(),
        ];
        let m = 200_000;
        for (s, spec) in specs.iter().enumerate() {
            let pi0 = spec.pi0();
            let mut rng = crate::rng::stream(77, s as u64);
            let mut zeros = 0.0;
            let mut gap_one = 0usize;
            for _ in 0..m {
                let (z, g) = spec.sample_run(&mut rng);
                assert!(g > 0);
                zeros += z as f64;
                gap_one += usize::from(g == 1);
            }
            let mean_zeros = pi0 / (1.0 - pi0);
            let sd_zeros = pi0.sqrt() / (1.0 - pi0);
            assert!((zeros / m as f64 - mean_zeros).abs() < 4.0 * sd_zeros / (m as f64).sqrt(), "spec {s}");
            let p1 = spec.pmf(1) / (1.0 - pi0);
            let se = (p1 * (1.0 - p1) / m as f64).sqrt();
            assert!((gap_one as f64 / m as f64 - p1).abs() < 4.0 * se + 1e-12, "spec {s}");
        }
    }
}
