//! Monte Carlo estimates of the limiting moments through the conditional moment formula.

use polya::interarrival::InterArrivalSpec;
use polya::moments::{estimate_limit_moments, StdErrorMethod};

fn main() -> polya::Result<()> {
    let pi = InterArrivalSpec::geometric(0.5, 1)?;
    let estimates = estimate_limit_moments(4, 1, 1, &pi, 10_000, 2000, 7, StdErrorMethod::Clt)?;
    for e in &estimates {
        println!("k={} factorial {:.5} +- {:.5}, raw {:.5}", e.k, e.factorial, e.std_error, e.raw);
    }
    Ok(())
}
