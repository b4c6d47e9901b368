//! Deterministic random streams.
//!
//! Every Monte Carlo path draws from its own xoshiro256++ stream, selected by
//! a `(seed, stream index)` pair. Results are therefore a function of the seed
//! and the path count only: the thread schedule never leaks into the numbers
//! because parallel maps collect in index order before any reduction.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

pub type StreamRng = Xoshiro256PlusPlus;

/// The RNG for path `index` under master seed `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    // seed_from_u64 expands its argument with SplitMix64, so adjacent
    // indices still give unrelated states
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Derive an independent master seed for a named sub-experiment.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49eb_1331_11eb);
    z ^ (z >> 31)
}

/// Run `f` once per stream index in parallel, returning results in index order.
pub fn map_streams<T, F>(seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut StreamRng) -> T + Sync + Send,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            f(i, &mut rng)
        })
        .collect()
}

/// Run `op` inside a dedicated rayon pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}
