//! Deterministic seed derivation.
//!
//! Every random draw in this crate comes from a ChaCha stream derived here,
//! so results are a pure function of the user-supplied 64-bit seed no
//! matter how work is ordered or parallelized.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives an independent 64-bit seed from `(seed, tag)` via a SplitMix64
/// step, so nearby tags do not yield correlated streams.
pub fn mix(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A generator for substream `index` of `seed`. Streams with distinct
/// indices are independent, so per-rule generation can run in any order.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
