//! Stable 64-bit seed derivation.
//!
//! `mix` is the SplitMix64 finalizer, a bijection on `u64`. Per-image seeds
//! are `mix(master + (index + 1) * GOLDEN)`; since `GOLDEN` is odd the
//! argument is injective in `index`, so distinct indices always get distinct
//! seeds.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for item `index` of a stream rooted at `master`.
#[inline]
pub fn mix2(master: u64, index: u64) -> u64 {
    mix(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}
