//! Deterministic randomness. All sampling in this crate goes through
//! ChaCha12 (fixed, cross-platform output stream) seeded from a 64-bit seed
//! plus a stream index, so every report and experiment is reproducible.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// ChaCha12 keyed with seed ‖ stream ‖ fixed tag (little-endian bytes).
pub(crate) fn seeded(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(b"codechck");
    ChaCha12Rng::from_seed(key)
}

/// Uniform draw from [0, bound) by rejection sampling on masked bits; no
/// modulo bias.
pub(crate) fn sample_below(rng: &mut ChaCha12Rng, bound: u64) -> u64 {
    assert!(bound > 0);
    if bound == 1 {
        return 0;
    }
    let mask = bound.next_power_of_two() - 1;
    loop {
        let v = rng.next_u64() & mask;
        if v < bound {
            return v;
        }
    }
}

/// splitmix64 of (master + index·golden): the per-trial seed derivation for
/// Monte-Carlo runs, independent of execution order.
pub(crate) fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
