//! Seed derivation.
//!
//! Every random quantity in the crate is a function of a master seed plus
//! structural indices (cell, trial, node pair). Streams are derived with a
//! splitmix64 finalizer, so parallel scheduling never changes results.
//!
//! Per-trial streams are ChaCha8 generators. Bit equality with other
//! implementations is not a goal; reproducibility within this one is.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two words.
#[inline]
pub fn mix2(a: u64, b: u64) -> u64 {
    mix64(mix64(a.wrapping_add(GOLDEN)) ^ b.wrapping_mul(GOLDEN).rotate_left(23))
}

/// Seed of the stream owned by `(seed, trial)`.
pub fn stream_seed(seed: u64, trial: u64) -> u64 {
    mix2(seed, trial)
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, trial))
}

/// Stateless uniform in `[0, 1)` attached to the unordered pair `a < b`.
#[inline]
pub fn pair_uniform(seed: u64, trial: u64, a: u32, b: u32) -> f64 {
    debug_assert!(a < b);
    let key = (u64::from(a) << 32) | u64::from(b);
    let h = mix2(stream_seed(seed, trial), key);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
