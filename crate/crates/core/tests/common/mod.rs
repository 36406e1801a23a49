//! Shared generators and oracles for the property suites.
#![allow(dead_code)]

pub mod core_gen;
pub mod criteria;
pub mod js_gen;
pub mod splits;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
