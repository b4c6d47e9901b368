//! Exact law of the white count for small horizons, by enumeration.

use polya::interarrival::InterArrivalSpec;
use polya::urn::{exact_pmf, UrnConfig};

fn main() -> polya::Result<()> {
    let pi = InterArrivalSpec::finite(&[(0, 0.5), (1, 0.5)])?;
    for n in 0..=4 {
        let pmf = exact_pmf(&UrnConfig::new(1, 1, pi.clone(), n)?)?;
        let atoms: Vec<String> = pmf.probs.iter().map(|(x, p)| format!("{x}:{p:.6}")).collect();
        println!("n={n} total={:.12} {}", pmf.total(), atoms.join(" "));
    }
    Ok(())
}
