//! Hierarchical seed splitting.
//!
//! Every random choice draws from a ChaCha stream keyed by a seed derived
//! from the run seed and a path of tags (block, trial, ...), so the order in
//! which parallel work is scheduled never changes what each piece sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One round of the splitmix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for the given tag path.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &tag| splitmix64(acc ^ splitmix64(tag.wrapping_add(0x5eed))))
}

pub fn rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}

/// Stream tags used across the crate.
pub mod tags {
    pub const EMBEDDING: u64 = 1;
    pub const APEX: u64 = 2;
    pub const FRESH_APEX: u64 = 3;
    pub const PROJECTION: u64 = 4;
    pub const GF2_SEARCH: u64 = 5;
}
