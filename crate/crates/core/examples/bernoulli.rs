//! Recover a two-point immigration law from the limit coefficients.

use polya::reference::{bernoulli_moments, bernoulli_pi_from_a, bernoulli_scan};

fn main() -> polya::Result<()> {
    let p = bernoulli_pi_from_a(2, 1.0, 1.0)?;
    let (ez, ez2) = bernoulli_moments(2, 1.0, 1.0)?;
    println!("pi0 {:.12}, pi1 {:.12}, E Z {ez:.6}, E Z^2 {ez2:.6}", p.pi0, p.pi1);
    let ratios: Vec<f64> = (-4..=4).map(|i| 10f64.powi(i)).collect();
    for point in bernoulli_scan(1, &ratios)? {
        println!("a1/a2 = {:>8.0e}: pi0 {:.6}", point.ratio, point.pi0);
    }
    Ok(())
}
