//! Numeric kernel: unbounded integers, rationals in lowest terms,
//! precision-tracked reals and complex values, truncation and gcd.
//!
//! Canonical text forms used everywhere (JSON payloads, golden files):
//! integers as decimal, rationals as `num/den` in lowest terms with positive
//! denominator, [`PrecReal`] as hex significand times a power of two with a
//! precision annotation (see its `Display` impl).

mod complex;
mod real;

pub use complex::PrecComplex;
pub use real::{exp2, ln, ln2, log2, ArithError, PrecReal};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rationals stored in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// gcd of the absolute values of a nonempty integer sequence; 0 iff all
/// entries are 0.
pub fn gcd_vector(v: &[BigInt]) -> Result<BigInt, ArithError> {
    if v.is_empty() {
        return Err(ArithError::EmptyInput);
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
        // gcd can only shrink toward 1 from here
        if g == BigInt::from(1) {
            break;
        }
    }
    Ok(g.abs())
}

/// `sign(x) * floor(2^n |x|) / 2^n` — keep the first `n` fractional bits.
pub fn truncate_to_bits(x: &PrecReal, n: u32) -> PrecReal {
    x.truncate_to_bits(n)
}

/// Square root at `p` precision bits; errors on negative input.
pub fn sqrt_prec(a: &PrecReal, p: u32) -> Result<PrecReal, ArithError> {
    a.sqrt(p)
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_string(s: &str) -> Result<Rational, ArithError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| ArithError::Parse)?;
    let den: BigInt = d.parse().map_err(|_| ArithError::Parse)?;
    if den.is_zero() {
        return Err(ArithError::Parse);
    }
    Ok(Rational::new(num, den))
}
