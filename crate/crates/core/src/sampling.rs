//! Seed derivation for order-independent sampling.
//!
//! Every sample in a sweep draws from its own ChaCha stream keyed by
//! `(seed, stream, index)`, so a sweep produces the same values whether it
//! runs serially or on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a stream label and a sample index.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)).wrapping_add(index))
}

pub fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, index))
}

/// Named streams so unrelated draws never share a sequence.
pub mod stream {
    pub const SPHERE: u64 = 1;
    pub const DUAL_SPHERE: u64 = 2;
    pub const RANKONE: u64 = 3;
    pub const NORM_TARGET: u64 = 4;
    pub const FALLBACK: u64 = 5;
    pub const CHECK: u64 = 6;
    pub const SEARCH: u64 = 7;
    pub const ORACLE: u64 = 8;
}
