//! Deterministic random streams and reduction helpers.
//!
//! Every random draw in the crate comes from a ChaCha12 stream keyed by
//! (seed, tags...). Tags name the consumer (span index, polarization,
//! purpose), so two runs with the same seed share draws for the streams
//! they have in common and parallel scheduling cannot reorder anything.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 finalizer; good avalanche, used only for key derivation.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent ChaCha12 stream from a base seed and a tag path.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha12Rng {
    let mut state = mix(seed);
    for &t in tags {
        state = mix(state ^ t);
    }
    let mut key = [0u8; 32];
    for chunk in 0..4 {
        state = mix(state);
        key[chunk * 8..(chunk + 1) * 8].copy_from_slice(&state.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// One standard-normal pair by Box-Muller.
pub fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0,1], keeps ln finite
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    (r * th.cos(), r * th.sin())
}

/// Pairwise (tree) summation. Fixed association order, so chunked or
/// parallel producers that feed a slice get the same total regardless of
/// scheduling; also better conditioned than a running sum.
pub fn tree_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
}
