//! Size-bias a sample, shrink it, and compare with the original.

use polya::bias::fixed_point_residual;
use polya::ul::ULSpec;

fn main() -> polya::Result<()> {
    let spec = ULSpec::polynomial(2.0, &[1.0, 1.0])?;
    let batch = spec.sample(50_000, 11, "two-point")?;
    let report = fixed_point_residual(&batch, spec.v(), &spec.psi()?, 12)?;
    println!("KS {:.5}, p-value {:.3}", report.ks, report.p_value);
    for row in &report.moment_table {
        println!("k={} {:.5} vs {:.5} (se {:.5})", row.k, row.lhs, row.rhs, row.se);
    }
    Ok(())
}
