//! Random stream helpers shared by the simulator and the generators.
//!
//! Every helper consumes a fixed number of 64-bit draws so that the draw
//! protocol of a run (and therefore its output) only depends on the seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The stream type used by every seeded entry point.
pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..n` from a single draw (multiply-shift, no rejection).
///
/// `n` must be non-zero.
#[inline]
pub fn index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Uniform real in `[0, 1)` with 53 bits of precision, one draw.
#[inline]
pub fn unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli trial: `true` with probability `p`. Exactly one draw, so `p = 1`
/// always succeeds and `p = 0` never does.
#[inline]
pub fn bernoulli<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> bool {
    unit(rng) < p
}

/// SplitMix64 finalizer; used to derive independent child seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th child of `master`. Stable across platforms and
/// independent of the number of siblings.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_stays_in_range() {
        let mut rng = seeded(1);
        for n in 1..50 {
            for _ in 0..200 {
                assert!(index(&mut rng, n) < n);
            }
        }
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = seeded(2);
        for _ in 0..1000 {
            assert!(bernoulli(&mut rng, 1.0));
            assert!(!bernoulli(&mut rng, 0.0));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, 0));
    }
}
