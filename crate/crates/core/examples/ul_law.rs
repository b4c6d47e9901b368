//! Build laws of the family, check their normalisation and sample from them.

use polya::ul::suite_specs;

fn main() -> polya::Result<()> {
    for (name, spec) in suite_specs()? {
        let batch = spec.sample(20_000, 3, name)?;
        let mean = batch.values.iter().sum::<f64>() / batch.len() as f64;
        println!(
            "{name:>13}: rho {:.3}, normalisation error {:.1e}, mean {:.4} (sampled {mean:.4}), density(1) {:.4}",
            spec.rho(),
            spec.normalization_error()?,
            spec.moment(1)?,
            spec.density(1.0)
        );
    }
    Ok(())
}
