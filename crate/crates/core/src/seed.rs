//! Deterministic per-item seed derivation.
//!
//! `mix(master, index)` is SplitMix64's finalizer applied to
//! `master + 0x9E3779B97F4A7C15 * (index + 1)` (wrapping):
//!
//! ```text
//! z = master + GOLDEN * (index + 1)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! Every trial, instance, or chain in a batch draws from its own ChaCha8
//! stream seeded with `mix(master, index)`, so batch results do not depend on
//! how the items are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64_finalize(master.wrapping_add(GOLDEN.wrapping_mul(index.wrapping_add(1))))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
