//! The immigration urn, the classical Pólya urn and exact small-instance
//! distributions.
//!
//! At each step a ball is drawn proportionally to the current counts and
//! returned together with one more ball of its colour; afterwards one black
//! ball is added for every arrival time `T_i` equal to the step index.
//! Arrivals at time 0 (leading zero gaps) add black balls before the first draw.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{PolyaError, Result};
use crate::interarrival::{make_interarrival, ArrivalSequence, InterArrivalDescriptor, InterArrivalSpec, Mean};
use crate::report::fmt_f64;
use crate::rng::map_streams;
use crate::special::lgamma;

#[derive(Debug, Clone)]
pub struct UrnConfig {
    pub black: u64,
    pub white: u64,
    pub pi: InterArrivalSpec,
    pub n: u64,
}

/// Serializable form of [`UrnConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrnConfigDescriptor {
    pub b: u64,
    pub w: u64,
    pub pi: InterArrivalDescriptor,
    pub n: u64,
}

impl UrnConfig {
    pub fn new(black: u64, white: u64, pi: InterArrivalSpec, n: u64) -> Result<Self> {
        if black == 0 || white == 0 {
            return Err(PolyaError::InvalidParameter("urn needs b >= 1 and w >= 1".into()));
        }
        Ok(Self { black, white, pi, n })
    }

    pub fn from_descriptor(d: &UrnConfigDescriptor) -> Result<Self> {
        Self::new(d.b, d.w, make_interarrival(&d.pi)?, d.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrnResult {
    /// `X_n`.
    pub white: u64,
    pub black: u64,
    /// `N_n`, arrivals up to and including draw `n`.
    pub arrivals: u64,
    /// `(white, black)` after each step `0..=n`, when recorded.
    pub path: Option<Vec<(u64, u64)>>,
    /// The driving arrival sequence, when recorded.
    pub sequence: Option<ArrivalSequence>,
}

/// Exact uniform draw on `0..total` (Lemire's multiply-and-reject) compared
/// against `white`. Kept branch-light because it is the innermost loop.
#[inline]
fn draw_white<R: Rng + ?Sized>(white: u64, total: u64, rng: &mut R) -> bool {
    if total > u32::MAX as u64 {
        return rng.random_range(0..total) < white;
    }
    let range = total as u32;
    let mut m = u64::from(rng.next_u32()) * u64::from(range);
    if (m as u32) < range {
        let threshold = range.wrapping_neg() % range;
        while (m as u32) < threshold {
            m = u64::from(rng.next_u32()) * u64::from(range);
        }
    }
    (m >> 32) < white
}

/// One path of the immigration urn.
pub fn simulate_urn<R: Rng + ?Sized>(config: &UrnConfig, rng: &mut R) -> UrnResult {
    if let InterArrivalDescriptor::Deterministic { k } = *config.pi.descriptor() {
        return simulate_urn_periodic(config, k, rng);
    }
    let pi = &config.pi;
    let (mut arrivals, mut next) = pi.sample_run(rng);
    let mut white = config.white;
    let mut total = config.white + config.black + arrivals;
    for t in 1..=config.n {
        white += u64::from(draw_white(white, total, rng));
        total += 1;
        if t == next {
            let (zeros, gap) = pi.sample_run(rng);
            total += 1 + zeros;
            arrivals += 1 + zeros;
            next = t.saturating_add(gap);
        }
    }
    UrnResult { white, black: total - white, arrivals, path: None, sequence: None }
}

// δ_k immigration: one arrival at every multiple of k.
fn simulate_urn_periodic<R: Rng + ?Sized>(config: &UrnConfig, k: u64, rng: &mut R) -> UrnResult {
    let mut white = config.white;
    let mut total = config.white + config.black;
    let mut phase = 0;
    for _ in 0..config.n {
        white += u64::from(draw_white(white, total, rng));
        phase += 1;
        let a = u64::from(phase == k);
        phase *= 1 - a;
        total += 1 + a;
    }
    let arrivals = config.n / k;
    UrnResult { white, black: total - white, arrivals, path: None, sequence: None }
}

/// As [`simulate_urn`] but also keeps the path and the arrival sequence.
pub fn simulate_urn_recorded<R: Rng + ?Sized>(config: &UrnConfig, rng: &mut R) -> UrnResult {
    let seq = crate::interarrival::sample_arrivals(&config.pi, config.n, rng);
    let mut result = simulate_urn_given_arrivals(config.black, config.white, &seq, config.n, rng);
    result.sequence = Some(seq);
    result
}

/// Run the urn against a fixed arrival sequence covering `0..=n`.
pub fn simulate_urn_given_arrivals<R: Rng + ?Sized>(
    black: u64,
    white: u64,
    seq: &ArrivalSequence,
    n: u64,
    rng: &mut R,
) -> UrnResult {
    assert!(seq.horizon() >= n, "arrival sequence shorter than the horizon");
    let mut w = white;
    let mut b = black + seq.arrivals_at(0);
    let mut path = Vec::with_capacity(n as usize + 1);
    path.push((w, b));
    for t in 1..=n {
        if draw_white(w, w + b, rng) {
            w += 1;
        } else {
            b += 1;
        }
        b += seq.arrivals_at(t);
        path.push((w, b));
    }
    UrnResult { white: w, black: b, arrivals: seq.count(n), path: Some(path), sequence: None }
}

/// White count after `Σ taus` draws, one black immigrant following each
/// block of `taus[j]` draws (immigrants after the last draw are irrelevant).
pub fn urn_white_given_taus<R: Rng + ?Sized>(black: u64, white: u64, taus: &[u64], rng: &mut R) -> u64 {
    let mut w = white;
    let mut total = white + black;
    for &tau in taus {
        for _ in 0..tau {
            w += u64::from(draw_white(w, total, rng));
            total += 1;
        }
        total += 1;
    }
    w
}

/// White count of a classical Pólya urn (no immigration) after `n` draws.
pub fn simulate_classical_urn<R: Rng + ?Sized>(black: u64, white: u64, n: u64, rng: &mut R) -> u64 {
    let mut w = white;
    for total in (white + black..).take(n as usize) {
        w += u64::from(draw_white(w, total, rng));
    }
    w
}

/// `X_n · n^{-μ/(μ+1)}`; the exponent is 1 for infinite mean.
pub fn scaled_white(x: u64, n: u64, mean: Mean) -> f64 {
    assert!(n >= 1, "scaling needs n >= 1");
    x as f64 * (n as f64).powf(-mean.scaling_exponent())
}

/// Exact law of the white count; keys are white counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExactPmf {
    pub probs: BTreeMap<u64, f64>,
}

impl ExactPmf {
    pub fn get(&self, x: u64) -> f64 {
        self.probs.get(&x).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// `Σ_x f(x) P(X = x)`.
    pub fn expect(&self, f: impl Fn(u64) -> f64) -> f64 {
        self.probs.iter().map(|(&x, &p)| f(x) * p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x as f64)
    }

    fn add(&mut self, x: u64, p: f64) {
        *self.probs.entry(x).or_insert(0.0) += p;
    }
}

pub const EXACT_MAX_STEPS: u64 = 10;
pub const EXACT_MAX_ATOMS: usize = 4;

fn exact_atoms(pi: &InterArrivalSpec, n: u64) -> Result<Vec<(u64, f64)>> {
    if n > EXACT_MAX_STEPS {
        return Err(PolyaError::TooLarge(format!("n = {n} exceeds {EXACT_MAX_STEPS}")));
    }
    match pi.atoms() {
        Some(atoms) if atoms.len() <= EXACT_MAX_ATOMS => Ok(atoms),
        Some(atoms) => Err(PolyaError::TooLarge(format!("{} atoms exceed {EXACT_MAX_ATOMS}", atoms.len()))),
        None => Err(PolyaError::TooLarge("inter-arrival law has infinite support".into())),
    }
}

/// Joint law of (extra blacks from a run of zero gaps, next positive gap).
/// Runs longer than the point where `π_0^k < 1e-20` are dropped.
fn batch_law(atoms: &[(u64, f64)]) -> Vec<(u64, u64, f64)> {
    let pi0 = atoms.iter().find(|a| a.0 == 0).map_or(0.0, |a| a.1);
    let positive: Vec<(u64, f64)> = atoms.iter().copied().filter(|a| a.0 > 0).collect();
    let mut out = Vec::new();
    let mut weight = 1.0;
    let mut k = 0u64;
    while weight >= 1e-20 {
        for &(g, p) in &positive {
            out.push((k, g, weight * p));
        }
        if pi0 == 0.0 {
            break;
        }
        weight *= pi0;
        k += 1;
    }
    out
}

/// Exact law of `X_n` by dynamic programming over `(white, black, steps to
/// next arrival)`, marginalising over the gaps. Needs `n <= 10` and at most
/// four atoms in `π`.
pub fn exact_pmf(config: &UrnConfig) -> Result<ExactPmf> {
    let atoms = exact_atoms(&config.pi, config.n)?;
    let batches = batch_law(&atoms);
    type State = (u64, u64, u64);
    let mut states: BTreeMap<State, f64> = BTreeMap::new();
    for &(k, g, p) in &batches {
        *states.entry((config.white, config.black + k, g)).or_insert(0.0) += p;
    }
    for _ in 0..config.n {
        let mut next: BTreeMap<State, f64> = BTreeMap::new();
        for (&(w, b, d), &p) in &states {
            let total = (w + b) as f64;
            for (nw, nb, q) in [(w + 1, b, w as f64 / total), (w, b + 1, b as f64 / total)] {
                if d > 1 {
                    *next.entry((nw, nb, d - 1)).or_insert(0.0) += p * q;
                } else {
                    for &(k, g, r) in &batches {
                        *next.entry((nw, nb + 1 + k, g)).or_insert(0.0) += p * q * r;
                    }
                }
            }
        }
        states = next;
    }
    let mut pmf = ExactPmf::default();
    for ((w, _, _), p) in states {
        pmf.add(w, p);
    }
    Ok(pmf)
}

/// Exact law of `X_n` given a fixed arrival sequence.
pub fn exact_pmf_given_arrivals(black: u64, white: u64, seq: &ArrivalSequence, n: u64) -> ExactPmf {
    assert!(seq.horizon() >= n);
    // probs[i] = P(X = white + i)
    let mut probs = vec![1.0f64];
    for t in 0..n {
        let total = (black + white + t + seq.count(t)) as f64;
        let mut next = vec![0.0; probs.len() + 1];
        for (i, &p) in probs.iter().enumerate() {
            let x = (white + i as u64) as f64;
            next[i + 1] += p * x / total;
            next[i] += p * (1.0 - x / total);
        }
        probs = next;
    }
    let mut pmf = ExactPmf::default();
    for (i, p) in probs.into_iter().enumerate() {
        if p > 0.0 {
            pmf.add(white + i as u64, p);
        }
    }
    pmf
}

/// All gap sequences relevant up to horizon `n` with their probabilities.
/// Requires `π_0 = 0` so the enumeration is finite.
pub fn enumerate_arrivals(pi: &InterArrivalSpec, n: u64) -> Result<Vec<(ArrivalSequence, f64)>> {
    let atoms = exact_atoms(pi, n)?;
    if atoms.iter().any(|a| a.0 == 0) {
        return Err(PolyaError::TooLarge("enumeration needs pi_0 = 0".into()));
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u64>, u64, f64)> = vec![(Vec::new(), 0, 1.0)];
    while let Some((taus, t, p)) = stack.pop() {
        for &(g, q) in &atoms {
            let mut next = taus.clone();
            next.push(g);
            if t + g > n {
                out.push((ArrivalSequence::from_taus(&next, n), p * q));
            } else {
                stack.push((next, t + g, p * q));
            }
        }
    }
    Ok(out)
}

/// Coupling of a classical Pólya urn with its Beta limit.
///
/// `V ~ Beta(ω, β)` is drawn first; the white count is the quantile of the
/// beta-binomial law at level `F_V(V)`, so `Q(n)` has exactly the classical
/// urn law and stays within a bounded distance of `n V`.
#[derive(Debug, Clone)]
pub struct PolyaBetaCoupling {
    beta_blacks: u64,
    omega_whites: u64,
    n: u64,
    cdf: Vec<f64>,
    limit: Beta<f64>,
}

impl PolyaBetaCoupling {
    pub fn new(beta_blacks: u64, omega_whites: u64, n: u64) -> Result<Self> {
        if beta_blacks == 0 || omega_whites == 0 {
            return Err(PolyaError::InvalidParameter("coupling needs beta, omega >= 1".into()));
        }
        let (b, w) = (beta_blacks as f64, omega_whites as f64);
        let nf = n as f64;
        let log_norm = lgamma(w) + lgamma(b) - lgamma(w + b);
        let mut acc = 0.0;
        let cdf = (0..=n)
            .map(|s| {
                let s = s as f64;
                let log_choose = lgamma(nf + 1.0) - lgamma(s + 1.0) - lgamma(nf - s + 1.0);
                let log_beta = lgamma(s + w) + lgamma(nf - s + b) - lgamma(nf + w + b);
                acc += (log_choose + log_beta - log_norm).exp();
                acc
            })
            .collect();
        let limit = Beta::new(w, b).map_err(|e| PolyaError::InvalidParameter(e.to_string()))?;
        Ok(Self { beta_blacks, omega_whites, n, cdf, limit })
    }

    /// Coupling bound `β(4ω + β + 1)` on `|Q(n) − n V|`.
    pub fn bound(&self) -> f64 {
        let (b, w) = (self.beta_blacks as f64, self.omega_whites as f64);
        b * (4.0 * w + b + 1.0)
    }

    /// Draw `(Q(n), V)`; errors if the coupling bound is violated.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(u64, f64)> {
        let v = self.limit.sample(rng);
        let level = statrs::function::beta::beta_reg(self.omega_whites as f64, self.beta_blacks as f64, v);
        let total = *self.cdf.last().expect("non-empty");
        let target = level * total;
        let s = self.cdf.partition_point(|&c| c < target).min(self.n as usize) as u64;
        let q = self.omega_whites + s;
        let gap = (q as f64 - self.n as f64 * v).abs();
        if gap >= self.bound() {
            return Err(PolyaError::InternalInconsistency(format!(
                "coupling gap {gap} exceeds bound {}",
                self.bound()
            )));
        }
        Ok((q, v))
    }
}

/// One coupled draw `(Q(n), V)`; see [`PolyaBetaCoupling`].
pub fn simulate_classical_polya<R: Rng + ?Sized>(
    beta_blacks: u64,
    omega_whites: u64,
    n: u64,
    rng: &mut R,
) -> Result<(u64, f64)> {
    PolyaBetaCoupling::new(beta_blacks, omega_whites, n)?.sample(rng)
}

/// Many independent paths, ordered by stream index.
pub fn simulate_batch(config: &UrnConfig, seed: u64, paths: usize) -> Vec<UrnResult> {
    map_streams(seed, paths, |_, rng| simulate_urn(config, rng))
}

/// CSV with columns `seed_stream,n,X_n,N_n,scaled_value`.
pub fn write_batch_csv<W: Write>(out: &mut W, results: &[UrnResult], n: u64, mean: Mean) -> std::io::Result<()> {
    writeln!(out, "seed_stream,n,X_n,N_n,scaled_value")?;
    for (i, r) in results.iter().enumerate() {
        let scaled = if n >= 1 { scaled_white(r.white, n, mean) } else { r.white as f64 };
        writeln!(out, "{i},{n},{},{},{}", r.white, r.arrivals, fmt_f64(scaled))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn delta(k: u64) -> InterArrivalSpec {
        InterArrivalSpec::deterministic(k).unwrap()
    }

    #[test]
    fn exact_two_steps_delta_one() {
        let cfg = UrnConfig::new(1, 1, delta(1), 2).unwrap();
        let pmf = exact_pmf(&cfg).unwrap();
        assert!((pmf.get(1) - 0.375).abs() < 1e-15);
        assert!((pmf.get(2) - 0.375).abs() < 1e-15);
        assert!((pmf.get(3) - 0.25).abs() < 1e-15);
        assert!((pmf.mean() - 15.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn exact_single_step_and_zero_steps() {
        let pmf = exact_pmf(&UrnConfig::new(1, 1, delta(1), 1).unwrap()).unwrap();
        assert_eq!(pmf.probs.len(), 2);
        assert!((pmf.get(1) - 0.5).abs() < 1e-15 && (pmf.get(2) - 0.5).abs() < 1e-15);
        let pmf0 = exact_pmf(&UrnConfig::new(2, 3, delta(2), 0).unwrap()).unwrap();
        assert_eq!(pmf0.get(3), 1.0);
    }

    #[test]
    fn exact_with_zero_gaps_sums_to_one() {
        let pi = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)]).unwrap();
        let pmf = exact_pmf(&UrnConfig::new(1, 2, pi, 6).unwrap()).unwrap();
        assert!((pmf.total() - 1.0).abs() < 1e-12);
        assert!(pmf.probs.keys().all(|&x| (2..=8).contains(&x)));
    }

    #[test]
    fn forced_zero_gap_first_draw() {
        // τ_1 = 0 always then τ = 1: a black ball joins before the first draw
        let pi = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)]).unwrap();
        let atoms = pi.atoms().unwrap();
        let batches = batch_law(&atoms);
        let p_one_black: f64 = batches.iter().filter(|b| b.0 == 0).map(|b| b.2).sum();
        assert!((p_one_black - 0.5).abs() < 1e-15);
        // with exactly one leading zero gap forced the first draw is white w.p. 1/3
        let seq = ArrivalSequence::from_taus(&[0, 2], 1);
        let pmf = exact_pmf_given_arrivals(1, 1, &seq, 1);
        assert!((pmf.get(2) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_bounds_enforced() {
        let big = UrnConfig::new(1, 1, delta(1), 11).unwrap();
        assert!(matches!(exact_pmf(&big), Err(PolyaError::TooLarge(_))));
        let geo = UrnConfig::new(1, 1, InterArrivalSpec::geometric(0.5, 1).unwrap(), 3).unwrap();
        assert!(matches!(exact_pmf(&geo), Err(PolyaError::TooLarge(_))));
        let five = InterArrivalSpec::finite(&[(1, 0.2), (2, 0.2), (3, 0.2), (4, 0.2), (5, 0.2)]).unwrap();
        assert!(matches!(exact_pmf(&UrnConfig::new(1, 1, five, 3).unwrap()), Err(PolyaError::TooLarge(_))));
    }

    #[test]
    fn exact_equals_mixture_over_enumerated_arrivals() {
        let pi = InterArrivalSpec::finite(&[(1, 0.3), (2, 0.5), (4, 0.2)]).unwrap();
        let cfg = UrnConfig::new(2, 1, pi.clone(), 7).unwrap();
        let direct = exact_pmf(&cfg).unwrap();
        let mut mixed = ExactPmf::default();
        for (seq, p) in enumerate_arrivals(&pi, 7).unwrap() {
            for (x, q) in exact_pmf_given_arrivals(2, 1, &seq, 7).probs {
                mixed.add(x, p * q);
            }
        }
        for x in 1..=8 {
            assert!((direct.get(x) - mixed.get(x)).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn simulation_respects_count_bounds() {
        let pi = InterArrivalSpec::finite(&[(0, 0.4), (2, 0.6)]).unwrap();
        let cfg = UrnConfig::new(2, 3, pi, 50).unwrap();
        for i in 0..200 {
            let r = simulate_urn(&cfg, &mut stream(4, i));
            assert!(r.white >= 3 && r.white <= 53);
            let black_draws = 50 - (r.white - 3);
            assert_eq!(r.black, 2 + r.arrivals + black_draws);
        }
    }

    #[test]
    fn recorded_path_is_consistent() {
        let pi = InterArrivalSpec::geometric(0.4, 0).unwrap();
        let cfg = UrnConfig::new(1, 1, pi, 30).unwrap();
        let r = simulate_urn_recorded(&cfg, &mut stream(8, 1));
        let path = r.path.as_ref().unwrap();
        assert_eq!(path.len(), 31);
        for pair in path.windows(2) {
            let grew_white = pair[1].0 - pair[0].0;
            assert!(grew_white <= 1);
            assert!(pair[1].1 >= pair[0].1);
        }
        let seq = r.sequence.unwrap();
        assert_eq!(r.arrivals, seq.count(30));
    }

    #[test]
    fn n_zero_keeps_initial_white() {
        let cfg = UrnConfig::new(1, 4, delta(1), 0).unwrap();
        assert_eq!(simulate_urn(&cfg, &mut stream(0, 0)).white, 4);
    }

    #[test]
    fn first_draw_white_frequency() {
        let cfg = UrnConfig::new(1, 1, delta(1), 1).unwrap();
        let m = 100_000;
        let hits = (0..m).filter(|&i| simulate_urn(&cfg, &mut stream(12, i)).white == 2).count();
        let se = (0.25 / m as f64).sqrt();
        assert!((hits as f64 / m as f64 - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn late_first_arrival_is_classical() {
        // δ_5 with n = 4: no immigration happens, so the law is the classical urn's
        let cfg = UrnConfig::new(2, 1, delta(5), 4).unwrap();
        let imm = exact_pmf(&cfg).unwrap();
        let seq = ArrivalSequence::from_taus(&[5], 4);
        let classical = exact_pmf_given_arrivals(2, 1, &seq, 4);
        assert_eq!(imm.probs.len(), classical.probs.len());
        for (x, p) in classical.probs {
            assert!((imm.get(x) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn immigration_stochastically_lowers_white() {
        let with = exact_pmf(&UrnConfig::new(1, 1, delta(1), 6).unwrap()).unwrap();
        let without = exact_pmf(&UrnConfig::new(1, 1, delta(7), 6).unwrap()).unwrap();
        let (mut fw, mut fo) = (0.0, 0.0);
        for x in 1..=7 {
            fw += with.get(x);
            fo += without.get(x);
            assert!(fw >= fo - 1e-15, "x={x}");
        }
    }

    #[test]
    fn classical_coupling_mean_and_bound() {
        let coupling = PolyaBetaCoupling::new(1, 1, 2).unwrap();
        let m = 100_000;
        let mut sum = 0.0;
        for i in 0..m {
            let (q, _) = coupling.sample(&mut stream(21, i)).unwrap();
            sum += q as f64;
        }
        let mean = sum / m as f64;
        // Q(2) is uniform on {1,2,3}
        let se = (2.0f64 / 3.0 / m as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * se);
    }

    #[test]
    fn coupling_bound_holds_across_parameters() {
        for &(b, w, n) in &[(1u64, 1u64, 10_000u64), (2, 3, 5000), (3, 1, 20_000), (4, 5, 777)] {
            let coupling = PolyaBetaCoupling::new(b, w, n).unwrap();
            for i in 0..2000 {
                coupling.sample(&mut stream(b * 100 + w, i)).unwrap();
            }
        }
    }

    #[test]
    fn coupled_white_count_has_classical_law() {
        // compare the quantile-coupled law with direct simulation at small n
        let n = 5;
        let coupling = PolyaBetaCoupling::new(2, 1, n).unwrap();
        let seq = ArrivalSequence::from_taus(&[n + 1], n);
        let exact = exact_pmf_given_arrivals(2, 1, &seq, n);
        let m = 100_000u64;
        let mut counts = BTreeMap::new();
        for i in 0..m {
            *counts.entry(coupling.sample(&mut stream(31, i)).unwrap().0).or_insert(0u64) += 1;
        }
        for (x, p) in exact.probs {
            let f = *counts.get(&x).unwrap_or(&0) as f64 / m as f64;
            assert!((f - p).abs() < 4.0 * (p * (1.0 - p) / m as f64).sqrt(), "x={x}");
        }
    }

    #[test]
    fn scaling() {
        assert!((scaled_white(100, 100, Mean::Finite(1.0)) - 10.0).abs() < 1e-12);
        assert!((scaled_white(50, 100, Mean::Infinite) - 0.5).abs() < 1e-15);
        assert_eq!(scaled_white(3, 1, Mean::Finite(2.5)), 3.0);
    }

    #[test]
    fn batch_csv_format() {
        let cfg = UrnConfig::new(1, 1, delta(1), 4).unwrap();
        let results = simulate_batch(&cfg, 5, 3);
        let mut buf = Vec::new();
        write_batch_csv(&mut buf, &results, 4, Mean::Finite(1.0)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "seed_stream,n,X_n,N_n,scaled_value");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,4,"));
    }
}
