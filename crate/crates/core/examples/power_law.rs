//! Heavy-tailed immigration: the reference law and an exploratory urn run.

use polya::reference::{powerlaw_reference, powerlaw_urn_experiment};

fn main() -> polya::Result<()> {
    let r = powerlaw_reference(1.0, 1.0, 1.0)?;
    let head: Vec<String> = (0..5).map(|j| format!("{:.5}", r.pi(j))).collect();
    println!("pi(0..5) = {}, E Z = {:.6}", head.join(", "), r.moment(1));
    let e = powerlaw_urn_experiment(1.0, 0.5, 1, 5000, 1000, 9)?;
    println!("{}: exponent {:.3}, fitted theta {:.4}, KS {:.4}", e.label, e.exponent, e.theta, e.ks);
    Ok(())
}
