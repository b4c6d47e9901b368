//! Closed-form limit for periodic immigration, checked against simulated paths.

use polya::interarrival::InterArrivalSpec;
use polya::reference::deterministic_limit;
use polya::rng::map_streams;
use polya::stats::ks_two_sample;
use polya::urn::{scaled_white, simulate_urn, UrnConfig};

fn main() -> polya::Result<()> {
    let n = 20_000;
    let config = UrnConfig::new(1, 1, InterArrivalSpec::deterministic(1)?, n)?;
    let mean = config.pi.mean();
    let urn: Vec<f64> = map_streams(1, 5000, |_, rng| scaled_white(simulate_urn(&config, rng).white, n, mean));
    // m_2 of the limit for unit gaps is 2
    let limit = deterministic_limit(1.0, 1, 2.0)?;
    let reference = limit.sample(5000, 2)?;
    let (ks, p) = ks_two_sample(&urn, &reference.values)?;
    println!("scale {:.4}, mean {:.4}, KS {ks:.4}, p-value {p:.3}", limit.scale(), limit.moment(1));
    Ok(())
}
