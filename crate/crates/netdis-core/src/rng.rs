//! Seeded random number streams.
//!
//! Every stochastic routine in this crate draws from a ChaCha8 generator
//! keyed by a 64-bit seed and a stream id. Independent concerns (network
//! generation, optimizer candidates, repeats) get distinct streams so that
//! their draws never interleave and results replay bit-identically on any
//! platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the generator for (`seed`, `stream`).
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes `(base, a, b)` into a new 64-bit seed via splitmix64.
///
/// Used to derive per-run seeds, e.g. `derive_seed(base, strategy_id, repeat)`
/// for experiment runs, so changing one coordinate decorrelates the output.
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(base ^ splitmix64(a)).wrapping_add(splitmix64(b ^ 0x6a09_e667_f3bc_c909)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
