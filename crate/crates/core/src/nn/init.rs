use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fills `buf` uniformly from `[-a, a]` with `a = sqrt(6 / (fan_in + fan_out))`.
pub fn glorot_uniform<R: Rng>(rng: &mut R, fan_in: usize, fan_out: usize, buf: &mut [f64]) {
    let limit = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
    for x in buf {
        *x = rng.gen_range(-limit..=limit);
    }
}
