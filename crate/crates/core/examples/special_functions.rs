//! Confluent hypergeometric U, exponential integral, gamma ratios and Stirling rows.

use polya::special::{exp_integral_e1, kummer_u, ln_gamma_ratio, rising, stirling_first_unsigned};

fn main() -> polya::Result<()> {
    for (a, b, z) in [(1.0, 0.5, 0.3), (2.0, 1.5, 2.0), (0.5, 0.5, 40.0)] {
        println!("U({a}, {b}, {z}) = {:.15}", kummer_u(a, b, z)?);
    }
    println!("E1(1e-4) = {:.12}", exp_integral_e1(1e-4)?);
    println!("ln Gamma(10.5)/Gamma(10) = {:.12}", ln_gamma_ratio(10.0, 0.5));
    println!("3^(5) rising = {}", rising(3.0, 5));
    println!("Stirling row 6: {:?}", stirling_first_unsigned(6)?.coefficients());
    Ok(())
}
