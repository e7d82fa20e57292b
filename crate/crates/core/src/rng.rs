//! Seed handling: one counter-based RNG stream per (seed, index) pair.
//!
//! ChaCha exposes independent streams for a fixed key, which gives each
//! replication its own generator without any cross-talk. Replications can
//! therefore run in any order, or in parallel, and still reproduce.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for stream `stream` under the key derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stable 64-bit mix of a seed with two indices (SplitMix64 finalizer).
///
/// Used to hand sub-estimators their own seeds inside a replication so their
/// draws never overlap with data generation.
pub fn derive_seed(seed: u64, index: u64, channel: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(channel.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
