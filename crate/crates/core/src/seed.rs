//! Deterministic seed derivation for parallel tasks.
//!
//! Every task gets its own ChaCha8 stream seeded from
//! `derive_seed(master, task_index)`, so the values a task sees do not depend
//! on scheduling order or on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for task `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let a = mix64(master.wrapping_add(GOLDEN_GAMMA));
    mix64(a ^ index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(0x2545_F491_4F6C_DD1D))
}

/// Derive along a path of task indices, e.g. `[word, rung, batch]`.
pub fn derive_path(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |s, &i| derive_seed(s, i))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
