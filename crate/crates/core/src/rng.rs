//! Seed plumbing. Every random quantity in a run descends from one master
//! seed: trial `i` draws from ChaCha8 stream `i` of the master key, and
//! auxiliary seeds (per sweep row, per batch step) come from a SplitMix64 mix.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for one Monte Carlo trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Derives a child seed from `(master, index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
