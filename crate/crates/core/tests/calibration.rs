//! Simulators against exact laws, and calibration of the KS p-values.

use polya::interarrival::InterArrivalSpec;
use polya::moments::classical_factorial_moment;
use polya::rng::{derive_seed, map_streams, stream};
use polya::stats::{ks_two_sample, ks_vs_cdf};
use polya::urn::{exact_pmf, simulate_batch, simulate_classical_urn, UrnConfig};
use rand::Rng;

#[test]
fn simulated_mean_matches_exact_mean() {
    let pi = InterArrivalSpec::finite(&[(0, 0.4), (1, 0.35), (3, 0.25)]).unwrap();
    let config = UrnConfig::new(2, 1, pi, 6).unwrap();
    let exact = exact_pmf(&config).unwrap();
    let paths = 200_000;
    let sims = simulate_batch(&config, 5, paths);
    let mean = sims.iter().map(|r| r.white as f64).sum::<f64>() / paths as f64;
    let var = exact.expect(|x| (x as f64 - exact.mean()).powi(2));
    assert!((mean - exact.mean()).abs() < 4.0 * (var / paths as f64).sqrt());
}

#[test]
fn classical_urn_matches_factorial_moment() {
    let (b, w, n) = (3, 2, 50);
    let paths = 100_000;
    let draws = map_streams(9, paths, |_, rng| simulate_classical_urn(b, w, n, rng) as f64);
    // first rising factorial moment of X_n is E X_n
    let mean = draws.iter().sum::<f64>() / paths as f64;
    let exact = classical_factorial_moment(1, n, b, w);
    let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / paths as f64).sqrt();
    assert!((mean - exact).abs() < 4.0 * sd / (paths as f64).sqrt(), "{mean} vs {exact}");
}

#[test]
fn ks_p_values_are_calibrated_under_the_null() {
    let reps = 500;
    let rejections = (0..reps)
        .filter(|&r| {
            let mut rng = stream(derive_seed(3, "ks-null"), r);
            let a: Vec<f64> = (0..400).map(|_| rng.random::<f64>()).collect();
            let b: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
            ks_two_sample(&a, &b).unwrap().1 < 0.01
        })
        .count();
    assert!(rejections as f64 / reps as f64 <= 0.03, "{rejections} of {reps}");
    let one_sample = (0..reps)
        .filter(|&r| {
            let mut rng = stream(derive_seed(4, "ks-null"), r);
            let a: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();
            ks_vs_cdf(&a, |x| x.clamp(0.0, 1.0)).unwrap().1 < 0.01
        })
        .count();
    assert!(one_sample as f64 / reps as f64 <= 0.03, "{one_sample} of {reps}");
}

#[test]
fn ks_detects_a_shift() {
    let mut rng = stream(11, 0);
    let a: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..2000).map(|_| rng.random::<f64>() + 0.1).collect();
    assert!(ks_two_sample(&a, &b).unwrap().1 < 1e-6);
}
