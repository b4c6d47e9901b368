//! Simulate an urn with two-point immigration and summarise the scaled white count.

use polya::interarrival::InterArrivalSpec;
use polya::urn::{scaled_white, simulate_batch, UrnConfig};

fn main() -> polya::Result<()> {
    let pi = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)])?;
    let config = UrnConfig::new(2, 1, pi, 10_000)?;
    let mean = config.pi.mean();
    let results = simulate_batch(&config, 42, 2000);
    let scaled: Vec<f64> = results.iter().map(|r| scaled_white(r.white, config.n, mean)).collect();
    let avg = scaled.iter().sum::<f64>() / scaled.len() as f64;
    println!("exponent {:.4}", mean.scaling_exponent());
    println!("mean scaled white count over {} paths: {avg:.4}", scaled.len());
    Ok(())
}
