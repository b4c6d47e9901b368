//! Moment bounds, tail ratios and the failures of closure.

use polya::reference::non_closure_checks;
use polya::ul::suite_specs;

fn main() -> polya::Result<()> {
    for (name, spec) in suite_specs()? {
        let worst = (1..=8)
            .map(|m| spec.moment(m).map(|mu| mu / spec.moment_upper_bound(m)))
            .collect::<polya::Result<Vec<_>>>()?;
        let mills = spec.mills_check(0.5, 100)?;
        println!(
            "{name:>13}: max moment/bound {:.4}, worst Mills ratio {:.4}",
            worst.iter().fold(0.0f64, |a, &b| a.max(b)),
            mills.worst_ratio
        );
    }
    let nc = non_closure_checks()?;
    for (x, density, ratio) in &nc.log_divergence {
        println!("x={x:e}: density {density:.4}, density / -ln x {ratio:.4}");
    }
    println!("fourth log-derivative of erfc at 0: {:.9} (exact {:.9})", nc.erfc_fourth, nc.erfc_target);
    Ok(())
}
