//! Seeded randomness. Every random draw in the crate flows from a caller
//! supplied `u64` seed; independent sub-streams are derived by index so
//! that parallel work is reproducible.

use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for sub-stream `(stream, index)`.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ splitmix(stream.wrapping_add(0x9e37_79b9_7f4a_7c15))
        ^ splitmix(index.wrapping_mul(0xd1b5_4a32_d192_ed03).wrapping_add(1));
    z = splitmix(z);
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform on the unit circle.
pub fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let theta = TAU * rng.random::<f64>();
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// Uniform phase with modulus uniform in `[0.5, 1.5]`.
pub fn generic_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let modulus = 0.5 + rng.random::<f64>();
    unit_complex(rng) * modulus
}

/// Standard complex Gaussian (unit variance per real coordinate).
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let radius = libm::sqrt(-2.0 * libm::log(u1));
    C64::new(radius * libm::cos(TAU * u2), radius * libm::sin(TAU * u2))
}
