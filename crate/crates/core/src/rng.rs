//! Deterministic, splittable random streams.
//!
//! Every random draw in the crate derives from `(master seed, trial index,
//! stream tag)` so each trial of an experiment is individually reproducible
//! on any platform.

use num_bigint::{BigInt, BigUint};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::PrecReal;

/// FNV-1a over the tag bytes; stable across platforms.
fn hash_tag(tag: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in tag.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial seed for sweeps: `(master, cell index, trial index)`.
pub fn derive_seed(master: u64, cell: u64, trial: u64) -> u64 {
    splitmix(splitmix(master ^ cell.wrapping_mul(0x9e3779b97f4a7c15)) ^ trial.wrapping_add(0x517cc1b727220a95))
}

/// Stream generator for `(master, trial, tag)`.
pub fn stream_rng(master: u64, trial: u64, tag: &str) -> ChaCha8Rng {
    let mut s = splitmix(master ^ 0x6c61747265635f31);
    s = splitmix(s ^ trial);
    s = splitmix(s ^ hash_tag(tag));
    let mut seed = [0u8; 32];
    for i in 0..4 {
        s = splitmix(s);
        seed[i * 8..(i + 1) * 8].copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// Uniform integer in `{1, ..., 2^bits}`.
pub fn uniform_pow2(rng: &mut ChaCha8Rng, bits: u32) -> BigInt {
    BigInt::from(uniform_bits(rng, bits)) + 1
}

/// Uniform integer in `[0, 2^bits)`.
pub fn uniform_bits(rng: &mut ChaCha8Rng, bits: u32) -> BigUint {
    let nbytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; nbytes];
    rng.fill_bytes(&mut buf);
    let extra = (nbytes * 8) as u32 - bits;
    if extra > 0 {
        buf[nbytes - 1] &= 0xffu8 >> extra;
    }
    BigUint::from_bytes_le(&buf)
}

/// Uniform integer in `[lo, hi]` (inclusive, small range).
pub fn uniform_range_i64(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    assert!(lo <= hi);
    let width = (hi - lo + 1) as u64;
    // rejection sampling keeps the draw unbiased
    let zone = u64::MAX - u64::MAX % width;
    loop {
        let r = rng.next_u64();
        if r < zone {
            return lo + (r % width) as i64;
        }
    }
}

/// Uniform integer in `[lo, hi]` (inclusive) for arbitrary-size bounds.
pub fn uniform_bigint_range(rng: &mut ChaCha8Rng, lo: &BigInt, hi: &BigInt) -> BigInt {
    assert!(lo <= hi);
    let span: BigInt = hi - lo + 1;
    let width: BigUint = span.magnitude().clone();
    let bits = width.bits() as u32;
    loop {
        let c = uniform_bits(rng, bits);
        if c < width {
            return lo + BigInt::from(c);
        }
    }
}

/// Uniform dyadic in `[0, 1)` with `prec` fractional bits.
pub fn uniform_unit(rng: &mut ChaCha8Rng, prec: u32) -> PrecReal {
    PrecReal::exact_dyadic(BigInt::from(uniform_bits(rng, prec)), -(prec as i64))
}

/// Uniform dyadic in `(-sigma, sigma)`: `sigma * (2u - 1)` with `u` uniform.
pub fn uniform_symmetric(rng: &mut ChaCha8Rng, sigma: &PrecReal, prec: u32) -> PrecReal {
    let u = uniform_unit(rng, prec);
    let t = u.scale2(1).sub_exact(&PrecReal::one(prec));
    sigma.mul_exact(&t)
}
