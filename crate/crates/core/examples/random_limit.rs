//! Full pipeline: estimate moments, build the limit law, compare with urn paths.

use polya::interarrival::InterArrivalDescriptor;
use polya::moments::MomentKind;
use polya::ul::{limit_check, LimitCheckConfig};

fn main() -> polya::Result<()> {
    let config = LimitCheckConfig {
        b: 2,
        w: 1,
        pi: InterArrivalDescriptor::Finite { probs: vec![(0, 0.5), (1, 0.5)] },
        moment_n: 10_000,
        moment_paths: 1000,
        n: 10_000,
        paths: 2000,
        kind: MomentKind::Raw,
        threshold: 0.05,
    };
    let (report, _) = limit_check(&config, 5)?;
    println!(
        "exponent {:.3}, KS {:.4}, p-value {:.3}, passed {}",
        report.exponent, report.ks, report.p_value, report.passed
    );
    println!("urn mean {:.4}, limit mean {:.4}", report.urn_mean, report.limit_mean);
    Ok(())
}
