//! Adaptive Gauss-Kronrod quadrature on finite ranges, including endpoint singularities.

use polya::quadrature::{integrate, Tolerance};

fn main() -> polya::Result<()> {
    let gauss = integrate(|x| (-x * x).exp(), -40.0, 40.0, Tolerance::default())?;
    println!(
        "integral of exp(-x^2) on (-40, 40) = {:.15} (sqrt(pi) = {:.15})",
        gauss.value,
        std::f64::consts::PI.sqrt()
    );
    let log = integrate(|x| -x.ln(), 0.0, 1.0, Tolerance::default())?;
    println!("integral of -ln x on (0, 1) = {:.15} +- {:.1e}", log.value, log.error);
    Ok(())
}
