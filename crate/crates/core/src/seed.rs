//! Counter-based seed derivation.
//!
//! Every random stream is a ChaCha8 generator seeded from
//! `mix(master, id, tag)`, so a trial's randomness depends only on its id and
//! never on execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Stream tags used by the simulator.
pub mod tag {
    pub const SCHEDULE: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const DESIGN: u64 = 3;
    pub const GA: u64 = 4;
    pub const EVAL: u64 = 5;
    pub const MOMENTARY: u64 = 6;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, id: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ id) ^ tag.wrapping_mul(GOLDEN))
}

pub fn stream(master: u64, id: u64, tag: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(master, id, tag))
}
