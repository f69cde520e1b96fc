#![allow(dead_code)]

use cogcap::ChannelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform on `[0.1, 100]`.
pub fn variance(rng: &mut impl Rng) -> f64 {
    10f64.powf(rng.gen_range(-1.0..=2.0))
}

/// Uniform on `[-0.99, 0.99]`.
pub fn correlation(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-0.99..=0.99)
}

pub fn random_channel(rng: &mut impl Rng) -> ChannelParams<f64> {
    ChannelParams::new(
        variance(rng),
        variance(rng),
        variance(rng),
        variance(rng),
        correlation(rng),
        correlation(rng),
    )
    .unwrap()
}

/// `count` seeded non-degenerate channels.
pub fn channels(seed: u64, count: usize) -> Vec<ChannelParams<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_channel(&mut r)).collect()
}
