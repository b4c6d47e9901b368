//! Sample moments and Kolmogorov–Smirnov statistics.

use serde::Serialize;

use crate::error::{PolyaError, Result};

/// `sqrt(−ln(0.005)/2)`: the asymptotic 99% Kolmogorov quantile.
pub const KS_99: f64 = 1.627_623_630_718_729_3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub k: usize,
    pub mean: f64,
    pub se: f64,
}

/// Sample means of `x^k`, `k = 1..=k_max`, with CLT standard errors.
pub fn empirical_moments(values: &[f64], k_max: usize) -> Result<Vec<MomentRow>> {
    if values.is_empty() {
        return Err(PolyaError::EmptyBatch);
    }
    let n = values.len() as f64;
    Ok((1..=k_max)
        .map(|k| {
            let powers = values.iter().map(|x| x.powi(k as i32));
            let mean = powers.clone().sum::<f64>() / n;
            let se = if values.len() > 1 {
                (powers.map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
            } else {
                0.0
            };
            MomentRow { k, mean, se }
        })
        .collect())
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // theta-function form, fast for small λ
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|k| (c * ((2 * k - 1) as f64).powi(2)).exp()).sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

// Asymptotic p-value with the usual small-sample correction of λ.
fn p_value(d: f64, effective_n: f64) -> f64 {
    let root = effective_n.sqrt();
    kolmogorov_survival((root + 0.12 + 0.11 / root) * d)
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample statistic `sup |F_a − F_b|` and its asymptotic p-value. Ties,
/// within or across samples, are handled exactly by stepping over all copies
/// of a value at once.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(PolyaError::EmptyBatch);
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok((d, p_value(d, na * nb / (na + nb))))
}

/// One-sample statistic against a continuous CDF.
pub fn ks_vs_cdf(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(PolyaError::EmptyBatch);
    }
    let v = sorted(values);
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);
    Ok((d, p_value(d, n)))
}

/// Asymptotic 99% critical value of the two-sample statistic.
pub fn ks_critical_99(n1: usize, n2: usize) -> f64 {
    KS_99 * ((n1 + n2) as f64 / (n1 as f64 * n2 as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn uniforms(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = stream(seed, 0);
        (0..n).map(|_| rng.random::<f64>()).collect()
    }

    #[test]
    fn constant_batch_moments() {
        let m = empirical_moments(&[2.0; 10], 3).unwrap();
        assert_eq!(m[2].mean, 8.0);
        assert_eq!(m[2].se, 0.0);
        assert!(empirical_moments(&[], 1).is_err());
    }

    #[test]
    fn pooled_mean_is_linear() {
        let v = uniforms(1, 1000);
        let whole = empirical_moments(&v, 1).unwrap()[0].mean;
        let left = empirical_moments(&v[..500], 1).unwrap()[0].mean;
        let right = empirical_moments(&v[500..], 1).unwrap()[0].mean;
        assert!((whole - 0.5 * (left + right)).abs() < 1e-15);
    }

    #[test]
    fn exponential_mean() {
        let mut rng = stream(2, 0);
        let v: Vec<f64> = (0..100_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let m = &empirical_moments(&v, 1).unwrap()[0];
        assert!((m.mean - 1.0).abs() < 4.0 * m.se);
    }

    #[test]
    fn ks_identities() {
        let v = uniforms(3, 1000);
        assert_eq!(ks_two_sample(&v, &v).unwrap().0, 0.0);
        let w = uniforms(4, 700);
        assert_eq!(ks_two_sample(&v, &w).unwrap().0, ks_two_sample(&w, &v).unwrap().0);
        assert!(ks_two_sample(&[], &v).is_err());
    }

    #[test]
    fn ks_handles_ties_exactly() {
        let a = [1.0, 1.0, 2.0, 2.0];
        let b = [1.0, 2.0, 2.0, 2.0];
        assert!((ks_two_sample(&a, &b).unwrap().0 - 0.25).abs() < 1e-15);
        assert_eq!(ks_two_sample(&[3.0; 5], &[3.0; 7]).unwrap().0, 0.0);
    }

    #[test]
    fn uniform_against_identity() {
        let n = 100_000;
        let (d, p) = ks_vs_cdf(&uniforms(5, n), |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < 1.63 / (n as f64).sqrt());
        assert!(p > 0.01);
    }

    #[test]
    fn distinct_laws_rejected() {
        let u = uniforms(6, 10_000);
        let (_, p) = ks_vs_cdf(&u, |x| 1.0 - (-x).exp()).unwrap();
        assert!(p < 1e-6);
    }

    #[test]
    fn kolmogorov_tail_values() {
        // reference values of the Kolmogorov distribution
        assert!((kolmogorov_survival(KS_99) - 0.009_999_998_749_999_996).abs() < 1e-12);
        assert!((kolmogorov_survival(1.0) - 0.269_999_671_677_354_56).abs() < 1e-9);
        assert!((kolmogorov_survival(0.5) - 0.963_945_243_664_875_1).abs() < 1e-9);
        // the two series agree where they meet
        let lo = kolmogorov_survival(1.18 - 1e-12);
        let hi = kolmogorov_survival(1.18);
        assert!((lo - hi).abs() < 1e-10);
    }
}
