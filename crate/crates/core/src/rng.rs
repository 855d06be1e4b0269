//! Counter-based random streams.
//!
//! Every random quantity attached to a vertex is a pure function of
//! `(seed, vertex index)`, so fields and marks are prefix-stable and do not
//! depend on evaluation order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Word `index` of the SplitMix64 sequence started at `seed`.
#[inline]
pub fn word_at(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Uniform draw in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform_at(seed: u64, index: u64) -> f64 {
    (word_at(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw for slot `index` (Box-Muller on two counter words).
#[inline]
pub fn normal_at(seed: u64, index: u64) -> f64 {
    let u1 = 1.0 - uniform_at(seed, 2 * index);
    let u2 = uniform_at(seed, 2 * index + 1);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Independent purposes a master seed is split into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Graph = 1,
    Field = 2,
    Marks = 3,
    Attempt = 4,
    Oracle = 5,
}

/// Seed for `(stream, index)` derived from `master`.
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let s = mix64(master ^ mix64(stream as u64).rotate_left(17));
    mix64(s ^ mix64(index.wrapping_mul(GAMMA) ^ (stream as u64)))
}

pub fn chacha(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
