//! Grow a graph by preferential attachment and compare a degree sum with its urn.

use polya::interarrival::InterArrivalSpec;
use polya::pa::{correspondence_exact, correspondence_mc, simulate_pa, SeedGraph};
use polya::rng::stream;

fn main() -> polya::Result<()> {
    let seed = SeedGraph::new(&[1, 1])?;
    let pi = InterArrivalSpec::geometric(0.5, 1)?;
    let state = simulate_pa(&seed, &pi, 1000, &mut stream(1, 0));
    let max = state.weights().iter().max().copied().unwrap_or(0);
    println!("{} vertices, {} edges, max weight {max}", state.vertex_count(), state.edges());
    let exact = correspondence_exact(&seed, &InterArrivalSpec::deterministic(1)?, 2, 4)?;
    println!("exact gap for k=2, n=4: {:.1e}", exact.max_gap);
    let mc = correspondence_mc(&seed, &pi, 1, 2000, 2000, 3)?;
    println!("graph vs urn KS {:.4} (critical {:.4})", mc.ks, mc.critical_99);
    Ok(())
}
