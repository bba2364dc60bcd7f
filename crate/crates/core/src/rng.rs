//! Seed plumbing: one master seed, counter-based derivation of independent
//! stream seeds so that serial and fanned-out runs agree.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 step; derives statistically independent seeds from a master
/// seed and a task counter.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for a given seed. ChaCha output is specified
/// bit-for-bit, so results are reproducible across platforms.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
