//! Conditional rising-factorial moments of the white count given the arrival
//! times, and Monte Carlo estimates of the limiting scaled moments `m_k`.
//!
//! With `D_{k,n} = X_n (X_n + 1) ... (X_n + k − 1)` and `c = b + w`,
//!
//! ```text
//! E(D_{k,n} | T) = Γ(w+k)/Γ(w) · ∏_{j=0}^{n−1} (c+k+j+N_j)/(c+j+N_j)
//! ```
//!
//! which telescopes between arrivals into a product over the arrivals only:
//!
//! ```text
//! Γ(w+k)Γ(c)/(Γ(w)Γ(c+k)) · Γ(c+N+n+k)/Γ(c+N+n) · ∏_{j=1}^{N} (c+j−1+T_j)/(c+j−1+T_j+k)
//! ```
//!
//! with `N = N_{n−1}`.

use std::io::Write;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PolyaError, Result};
use crate::interarrival::{ArrivalSequence, InterArrivalSpec};
use crate::report::fmt_f64;
use crate::rng::{derive_seed, map_streams, stream};
use crate::special::{lgamma, ln_gamma_ratio, stirling_first_unsigned};

const AGREEMENT: f64 = 1e-10;

fn check_args(k: u32, n: u64, b: u64, w: u64, seq: &ArrivalSequence) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(PolyaError::InvalidParameter("need k >= 1 and n >= 1".into()));
    }
    if b == 0 || w == 0 {
        return Err(PolyaError::InvalidParameter("need b >= 1 and w >= 1".into()));
    }
    if seq.horizon() + 1 < n {
        return Err(PolyaError::InvalidParameter(format!("arrivals cover 0..={} but n = {n}", seq.horizon())));
    }
    Ok(())
}

/// `ln E(D_{k,n} | T)` from the product over all draws.
pub fn log_moment_by_draws(k: u32, n: u64, b: u64, w: u64, seq: &ArrivalSequence) -> Result<f64> {
    check_args(k, n, b, w, seq)?;
    let (c, kf) = ((b + w) as f64, f64::from(k));
    let mut log = ln_gamma_ratio(w as f64, kf);
    for j in 0..n {
        log += (kf / (c + j as f64 + seq.count(j) as f64)).ln_1p();
    }
    Ok(log)
}

/// `ln E(D_{k,n} | T)` from the product over arrivals.
pub fn log_moment_by_arrivals(k: u32, n: u64, b: u64, w: u64, seq: &ArrivalSequence) -> Result<f64> {
    check_args(k, n, b, w, seq)?;
    let (c, kf) = ((b + w) as f64, f64::from(k));
    let big_n = seq.count(n - 1);
    let mut log =
        ln_gamma_ratio(w as f64, kf) - ln_gamma_ratio(c, kf) + ln_gamma_ratio(c + big_n as f64 + n as f64, kf);
    for (j, &t) in seq.times.iter().take(big_n as usize).enumerate() {
        log -= (kf / (c + j as f64 + t as f64)).ln_1p();
    }
    Ok(log)
}

/// `E(D_{k,n} | T)`. Both product forms are evaluated in log space and must
/// agree to a relative `1e-10`.
pub fn rising_factorial_moment_given_t(k: u32, n: u64, b: u64, w: u64, seq: &ArrivalSequence) -> Result<f64> {
    let by_draws = log_moment_by_draws(k, n, b, w, seq)?;
    let by_arrivals = log_moment_by_arrivals(k, n, b, w, seq)?;
    let rel = (by_draws - by_arrivals).exp_m1().abs();
    if !(rel <= AGREEMENT) {
        return Err(PolyaError::InternalInconsistency(format!(
            "conditional moment forms disagree: relative gap {rel:e}"
        )));
    }
    Ok(by_draws.exp())
}

/// Raw moments `E X^i`, `i = 1..=k`, from rising-factorial moments
/// `E X^{(i)}`, using `x^{(k)} = Σ_i [k i] x^i`.
pub fn factorial_to_raw(factorial: &[f64]) -> Result<Vec<f64>> {
    let mut raw: Vec<f64> = Vec::with_capacity(factorial.len());
    for (idx, &d) in factorial.iter().enumerate() {
        let k = idx as u32 + 1;
        let row = stirling_first_unsigned(k)?;
        let lower: f64 = (1..k).map(|i| row.get(i) as f64 * raw[i as usize - 1]).sum();
        raw.push(d - lower);
    }
    Ok(raw)
}

/// Running evaluation of the arrival product for orders `1..=k_max`.
struct ArrivalProduct {
    c: f64,
    prods: Vec<f64>,
    logs: Vec<f64>,
    count: u64,
}

impl ArrivalProduct {
    fn new(c: f64, k_max: u32) -> Self {
        Self { c, prods: vec![1.0; k_max as usize], logs: vec![0.0; k_max as usize], count: 0 }
    }

    #[inline]
    fn push(&mut self, t: u64) {
        let x = self.c + self.count as f64 + t as f64;
        let inv = 1.0 / x;
        for (i, p) in self.prods.iter_mut().enumerate() {
            *p /= 1.0 + (i + 1) as f64 * inv;
        }
        self.count += 1;
        if self.count.is_multiple_of(256) {
            self.flush();
        }
    }

    fn flush(&mut self) {
        for (l, p) in self.logs.iter_mut().zip(self.prods.iter_mut()) {
            *l += p.ln();
            *p = 1.0;
        }
    }

    /// `E(D_{k,n} | T)` for `k = 1..=k_max`, given `N = N_{n−1}` pushes.
    fn finish(mut self, w: u64, n: u64) -> Vec<f64> {
        self.flush();
        let c = self.c;
        let top = c + self.count as f64 + n as f64;
        self.logs
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let k = (i + 1) as f64;
                (ln_gamma_ratio(w as f64, k) - ln_gamma_ratio(c, k) + ln_gamma_ratio(top, k) + l).exp()
            })
            .collect()
    }
}

/// `E(D_{k,n} | T)` for `k = 1..=k_max` given a stored sequence.
pub fn conditional_moments_given_arrivals(k_max: u32, n: u64, b: u64, w: u64, seq: &ArrivalSequence) -> Vec<f64> {
    let mut acc = ArrivalProduct::new((b + w) as f64, k_max);
    for &t in seq.times.iter().take_while(|&&t| t < n) {
        acc.push(t);
    }
    acc.finish(w, n)
}

/// Same as [`conditional_moments_given_arrivals`] with arrivals sampled on
/// the fly from `pi`.
pub fn sample_conditional_moments<R: Rng + ?Sized>(
    k_max: u32,
    n: u64,
    b: u64,
    w: u64,
    pi: &InterArrivalSpec,
    rng: &mut R,
) -> Vec<f64> {
    let mut acc = ArrivalProduct::new((b + w) as f64, k_max);
    let (zeros, gap) = pi.sample_run(rng);
    if n > 0 {
        for _ in 0..zeros {
            acc.push(0);
        }
    }
    let mut t = gap;
    while t < n {
        acc.push(t);
        let (zeros, gap) = pi.sample_run(rng);
        for _ in 0..zeros {
            acc.push(t);
        }
        t = t.saturating_add(gap);
    }
    acc.finish(w, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentKind {
    Factorial,
    Raw,
}

/// Monte Carlo estimate of a scaled limit moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub k: u32,
    /// Horizon `n`.
    pub n: u64,
    /// Number of arrival paths `M`.
    pub paths: usize,
    /// `E D_{k,n} / n^{kγ}`, `γ = μ/(μ+1)`.
    pub factorial: f64,
    /// `E X_n^k / n^{kγ}`.
    pub raw: f64,
    pub std_error: f64,
    pub raw_std_error: f64,
}

impl MomentEstimate {
    pub fn value(&self, kind: MomentKind) -> f64 {
        match kind {
            MomentKind::Factorial => self.factorial,
            MomentKind::Raw => self.raw,
        }
    }

    pub fn se(&self, kind: MomentKind) -> f64 {
        match kind {
            MomentKind::Factorial => self.std_error,
            MomentKind::Raw => self.raw_std_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdErrorMethod {
    #[default]
    Clt,
    /// 200 resamples of the path values.
    Bootstrap,
}

pub const BOOTSTRAP_RESAMPLES: usize = 200;

fn mean_and_se(values: &[f64], method: StdErrorMethod, seed: u64) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let se = match method {
        StdErrorMethod::Clt => {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        }
        StdErrorMethod::Bootstrap => {
            let mut rng = stream(seed, 0);
            let means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
                .map(|_| (0..values.len()).map(|_| *values.choose(&mut rng).expect("non-empty")).sum::<f64>() / m)
                .collect();
            let centre = means.iter().sum::<f64>() / means.len() as f64;
            let var = means.iter().map(|v| (v - centre).powi(2)).sum::<f64>() / (means.len() as f64 - 1.0);
            var.sqrt()
        }
    };
    (mean, se)
}

/// Estimate `m_1..m_{k_max}` of `X_n / n^{μ/(μ+1)}` by averaging the exact
/// conditional moments over `paths` independent arrival sequences.
///
/// Deterministic `π` has a single arrival sequence, so it is evaluated once
/// and the standard errors are zero.
#[allow(clippy::too_many_arguments)]
pub fn estimate_limit_moments(
    k_max: u32,
    b: u64,
    w: u64,
    pi: &InterArrivalSpec,
    n: u64,
    paths: usize,
    seed: u64,
    method: StdErrorMethod,
) -> Result<Vec<MomentEstimate>> {
    if k_max == 0 || k_max > 12 {
        return Err(PolyaError::InvalidParameter("k_max must lie in 1..=12".into()));
    }
    if b == 0 || w == 0 || n == 0 {
        return Err(PolyaError::InvalidParameter("need b, w, n >= 1".into()));
    }
    if paths < 100 {
        return Err(PolyaError::InvalidParameter(format!("need at least 100 paths, got {paths}")));
    }
    let gamma = pi.mean().scaling_exponent();
    let log_n = (n as f64).ln();
    let scale: Vec<f64> = (1..=k_max).map(|k| (-f64::from(k) * gamma * log_n).exp()).collect();
    let per_path = |rng: &mut crate::rng::StreamRng| -> Result<(Vec<f64>, Vec<f64>)> {
        let fact = sample_conditional_moments(k_max, n, b, w, pi, rng);
        let raw = factorial_to_raw(&fact)?;
        let s = |v: Vec<f64>| v.into_iter().zip(&scale).map(|(x, s)| x * s).collect::<Vec<_>>();
        Ok((s(fact), s(raw)))
    };
    let rows: Vec<(Vec<f64>, Vec<f64>)> = if pi.is_deterministic() {
        vec![per_path(&mut stream(seed, 0))?]
    } else {
        map_streams(seed, paths, |_, rng| per_path(rng)).into_iter().collect::<Result<_>>()?
    };
    let boot_seed = derive_seed(seed, "bootstrap");
    (0..k_max as usize)
        .map(|i| {
            let fact: Vec<f64> = rows.iter().map(|r| r.0[i]).collect();
            let raw: Vec<f64> = rows.iter().map(|r| r.1[i]).collect();
            let (factorial, std_error) = mean_and_se(&fact, method, boot_seed);
            let (raw, raw_std_error) = mean_and_se(&raw, method, boot_seed);
            if !(factorial > 0.0) || !factorial.is_finite() {
                return Err(PolyaError::InternalInconsistency(format!("m_{} estimate {factorial}", i + 1)));
            }
            Ok(MomentEstimate { k: i as u32 + 1, n, paths, factorial, raw, std_error, raw_std_error })
        })
        .collect()
}

/// CSV with columns `k,n,M,m_k_factorial,m_k_raw,std_error`.
pub fn write_moments_csv<W: Write>(out: &mut W, estimates: &[MomentEstimate]) -> std::io::Result<()> {
    writeln!(out, "k,n,M,m_k_factorial,m_k_raw,std_error")?;
    for e in estimates {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.k,
            e.n,
            e.paths,
            fmt_f64(e.factorial),
            fmt_f64(e.raw),
            fmt_f64(e.std_error)
        )?;
    }
    Ok(())
}

/// Classical Pólya factorial moment `Γ(w+k)Γ(c)Γ(c+n+k) / (Γ(w)Γ(c+k)Γ(c+n))`.
pub fn classical_factorial_moment(k: u32, n: u64, b: u64, w: u64) -> f64 {
    let (c, kf) = ((b + w) as f64, f64::from(k));
    (lgamma(w as f64 + kf) - lgamma(w as f64) + lgamma(c) - lgamma(c + kf) + ln_gamma_ratio(c + n as f64, kf)).exp()
}
