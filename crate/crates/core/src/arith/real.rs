//! Precision-tracked binary floating point.
//!
//! A [`PrecReal`] is a dyadic rational `sig * 2^exp` together with a precision
//! budget in bits. Results of the budgeted operations (`add`, `mul`, `div`,
//! ...) are rounded to the minimum of the operand budgets with
//! round-to-nearest-even, losing at most one ulp per operation. The `_exact`
//! variants never round and grow the budget to whatever the result needs;
//! instance generators use them so planted identities hold exactly.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Dyadic real `sig * 2^exp` carrying an explicit precision budget.
///
/// Invariants: `sig` is zero (then `exp == 0`) or odd, so the representation
/// of every value is unique and serialization is canonical.
#[derive(Clone, Debug)]
pub struct PrecReal {
    sig: BigInt,
    exp: i64,
    prec: u32,
}

/// Equality is on the dyadic value; the precision budget is metadata.
impl PartialEq for PrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.exp == other.exp
    }
}

impl Eq for PrecReal {}

impl PrecReal {
    pub fn zero(prec: u32) -> Self {
        PrecReal { sig: BigInt::zero(), exp: 0, prec: prec.max(1) }
    }

    pub fn one(prec: u32) -> Self {
        PrecReal { sig: BigInt::one(), exp: 0, prec: prec.max(1) }
    }

    /// Exact dyadic constructor; the budget is set large enough that the
    /// stored value is never rounded.
    pub fn exact_dyadic(sig: BigInt, exp: i64) -> Self {
        let bits = sig.magnitude().bits().max(1) as u32;
        Self::normalize(sig, exp, bits)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::normalize(v.clone(), 0, prec.max(v.magnitude().bits().max(1) as u32))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    /// Exact conversion from an `f64` (every finite f64 is dyadic).
    pub fn from_f64(v: f64, prec: u32) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero(prec));
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Self::normalize(BigInt::from(sign) * BigInt::from(mantissa), exp, prec))
    }

    fn normalize(mut sig: BigInt, mut exp: i64, prec: u32) -> Self {
        let prec = prec.max(1);
        if sig.is_zero() {
            return PrecReal { sig, exp: 0, prec };
        }
        let tz = sig.trailing_zeros().unwrap_or(0) as i64;
        if tz > 0 {
            sig >>= tz as usize;
            exp += tz;
        }
        let bits = sig.magnitude().bits() as i64;
        let excess = bits - prec as i64;
        if excess <= 0 {
            return PrecReal { sig, exp, prec };
        }
        // Round-to-nearest-even on the dropped low bits.
        let shift = excess as usize;
        let neg = sig.is_negative();
        let mag = sig.magnitude().clone();
        let kept = &mag >> shift;
        let dropped = &mag - (&kept << shift);
        let half = num_bigint::BigUint::one() << (shift - 1);
        let rounded = match dropped.cmp(&half) {
            Ordering::Less => kept,
            Ordering::Greater => kept + 1u32,
            Ordering::Equal => {
                if kept.is_odd() {
                    kept + 1u32
                } else {
                    kept
                }
            }
        };
        let sig2 = if neg {
            -BigInt::from(rounded)
        } else {
            BigInt::from(rounded)
        };
        // Carry out of the top bit can re-violate the budget; renormalize.
        Self::normalize(sig2, exp + excess, prec)
    }

    pub fn significand(&self) -> &BigInt {
        &self.sig
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.sig.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.sig.is_negative()
    }

    /// Re-round to a new precision budget.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalize(self.sig.clone(), self.exp, prec)
    }

    pub fn neg(&self) -> Self {
        PrecReal { sig: -self.sig.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        PrecReal { sig: self.sig.abs(), exp: self.exp, prec: self.prec }
    }

    fn add_raw(a: &Self, b: &Self) -> (BigInt, i64) {
        if a.sig.is_zero() {
            return (b.sig.clone(), b.exp);
        }
        if b.sig.is_zero() {
            return (a.sig.clone(), a.exp);
        }
        let e = a.exp.min(b.exp);
        let sa = &a.sig << (a.exp - e) as usize;
        let sb = &b.sig << (b.exp - e) as usize;
        (sa + sb, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (sig, exp) = Self::add_raw(self, other);
        Self::normalize(sig, exp, self.prec.min(other.prec))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn add_exact(&self, other: &Self) -> Self {
        let (sig, exp) = Self::add_raw(self, other);
        Self::exact_dyadic(sig, exp)
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalize(&self.sig * &other.sig, self.exp + other.exp, self.prec.min(other.prec))
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        Self::exact_dyadic(&self.sig * &other.sig, self.exp + other.exp)
    }

    pub fn mul_bigint_exact(&self, k: &BigInt) -> Self {
        Self::exact_dyadic(&self.sig * k, self.exp)
    }

    /// `self * 2^k`, exact.
    pub fn scale2(&self, k: i64) -> Self {
        if self.sig.is_zero() {
            return self.clone();
        }
        PrecReal { sig: self.sig.clone(), exp: self.exp + k, prec: self.prec }
    }

    /// Quotient rounded to `min(self.prec, other.prec)` bits.
    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        self.div_prec(other, prec)
    }

    pub fn div_prec(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.sig.is_zero(), "division by zero");
        if self.sig.is_zero() {
            return Self::zero(prec);
        }
        let bits_a = self.sig.magnitude().bits() as i64;
        let bits_b = other.sig.magnitude().bits() as i64;
        let shift = (prec as i64 + 2 + bits_b - bits_a).max(0) as usize;
        let num = &self.sig << shift;
        let (mut q, r) = num.div_rem(&other.sig);
        // Round the truncated quotient to nearest; a half-ulp bias on exact
        // ties is within the 1 ulp contract.
        if !r.is_zero() {
            let two_r: BigInt = r.abs() << 1;
            if two_r >= other.sig.abs() {
                if self.sig.is_negative() == other.sig.is_negative() {
                    q += 1;
                } else {
                    q -= 1;
                }
            }
        }
        Self::normalize(q, self.exp - other.exp - shift as i64, prec)
    }

    /// Nearest integer, ties to even.
    pub fn round_to_int(&self) -> BigInt {
        if self.sig.is_zero() {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            return &self.sig << self.exp as usize;
        }
        let shift = (-self.exp) as usize;
        let neg = self.sig.is_negative();
        let mag = self.sig.magnitude().clone();
        let kept = &mag >> shift;
        let dropped = &mag - (&kept << shift);
        let half = num_bigint::BigUint::one() << (shift - 1);
        let rounded = match dropped.cmp(&half) {
            Ordering::Less => kept,
            Ordering::Greater => kept + 1u32,
            Ordering::Equal => {
                if kept.is_odd() {
                    kept + 1u32
                } else {
                    kept
                }
            }
        };
        if neg {
            -BigInt::from(rounded)
        } else {
            BigInt::from(rounded)
        }
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.sig << self.exp as usize;
        }
        let shift = (-self.exp) as usize;
        self.sig.div_floor(&(BigInt::one() << shift))
    }

    /// Exact comparison of the underlying dyadic values.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.sig.is_negative(), other.sig.is_negative(), self.sig.is_zero(), other.sig.is_zero()) {
            (_, _, true, true) => return Ordering::Equal,
            (_, _, true, false) => {
                return if other.sig.is_negative() { Ordering::Greater } else { Ordering::Less }
            }
            (_, _, false, true) => {
                return if self.sig.is_negative() { Ordering::Less } else { Ordering::Greater }
            }
            (false, true, _, _) => return Ordering::Greater,
            (true, false, _, _) => return Ordering::Less,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let sa = &self.sig << (self.exp - e) as usize;
        let sb = &other.sig << (other.exp - e) as usize;
        sa.cmp(&sb)
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Less
    }

    /// `|self| < 2^k`, exact.
    pub fn abs_lt_pow2(&self, k: i64) -> bool {
        if self.sig.is_zero() {
            return true;
        }
        let bits = self.sig.magnitude().bits() as i64;
        // 2^(bits-1) <= |sig| < 2^bits, so |value| < 2^(bits + exp).
        if bits + self.exp <= k {
            return true;
        }
        if bits - 1 + self.exp >= k {
            return false;
        }
        unreachable!("bits + exp - 1 == k == bits + exp cannot both fail")
    }

    /// floor(log2 |self|): k with 2^k <= |self| < 2^(k+1).
    pub fn ilog2_floor(&self) -> i64 {
        assert!(!self.sig.is_zero(), "log of zero");
        self.sig.magnitude().bits() as i64 - 1 + self.exp
    }

    pub fn to_f64(&self) -> f64 {
        if self.sig.is_zero() {
            return 0.0;
        }
        let bits = self.sig.magnitude().bits() as i64;
        let drop = (bits - 60).max(0);
        let top = self.sig.magnitude() >> drop as usize;
        let mut v = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        if self.sig.sign() == Sign::Minus {
            v = -v;
        }
        v * 2f64.powi((self.exp + drop) as i32)
    }

    /// Truncate toward zero keeping `n` fractional bits:
    /// `sign(x) * floor(2^n |x|) / 2^n`. Total and exact.
    pub fn truncate_to_bits(&self, n: u32) -> PrecReal {
        if self.sig.is_zero() {
            return self.clone();
        }
        let shift = self.exp + n as i64;
        if shift >= 0 {
            // Already an integer multiple of 2^-n.
            return self.clone();
        }
        let drop = (-shift) as usize;
        let mag = self.sig.magnitude() >> drop;
        let sig = if self.sig.is_negative() {
            -BigInt::from(mag)
        } else {
            BigInt::from(mag)
        };
        Self::exact_dyadic(sig, -(n as i64))
    }

    /// `self * 2^n` as an exact integer; requires the value to be a multiple
    /// of `2^-n` (e.g. the output of [`truncate_to_bits`]).
    pub fn scaled_to_int(&self, n: u32) -> Option<BigInt> {
        if self.sig.is_zero() {
            return Some(BigInt::zero());
        }
        let shift = self.exp + n as i64;
        if shift < 0 {
            return None;
        }
        Some(&self.sig << shift as usize)
    }

    /// Square root with `|r^2 - a| < 2^-p * max(1, a)`; exact when the value
    /// is a perfect dyadic square.
    pub fn sqrt(&self, p: u32) -> Result<PrecReal, ArithError> {
        if self.sig.is_negative() {
            return Err(ArithError::NegativeSqrt);
        }
        if self.sig.is_zero() {
            return Ok(Self::zero(p));
        }
        let out_bits = p as i64 + 4;
        let bits = self.sig.magnitude().bits() as i64;
        let mut j = (2 * out_bits - bits).max(0);
        if (self.exp - j) % 2 != 0 {
            j += 1;
        }
        let shifted = self.sig.magnitude() << j as usize;
        let root = shifted.sqrt();
        let root_bits = root.bits().max(1) as u32;
        let prec = (out_bits as u32).max(root_bits);
        Ok(Self::normalize(BigInt::from(root), (self.exp - j) / 2, prec))
    }
}

impl fmt::Display for PrecReal {
    /// Canonical text form: `[-]0x<hex>p<exp>@<prec>` with odd (normalized)
    /// significand, e.g. `-0x5p-3@64` for -5/8 at 64 bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.is_negative() {
            write!(f, "-")?;
        }
        write!(f, "0x{}p{}@{}", self.sig.magnitude().to_str_radix(16), self.exp, self.prec)
    }
}

impl std::str::FromStr for PrecReal {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let rest = rest.strip_prefix("0x").ok_or(ArithError::Parse)?;
        let p_at = rest.find('p').ok_or(ArithError::Parse)?;
        let at = rest.find('@').ok_or(ArithError::Parse)?;
        if at < p_at {
            return Err(ArithError::Parse);
        }
        let mag = num_bigint::BigUint::parse_bytes(rest[..p_at].as_bytes(), 16).ok_or(ArithError::Parse)?;
        let exp: i64 = rest[p_at + 1..at].parse().map_err(|_| ArithError::Parse)?;
        let prec: u32 = rest[at + 1..].parse().map_err(|_| ArithError::Parse)?;
        let sig = if neg { -BigInt::from(mag) } else { BigInt::from(mag) };
        Ok(Self::normalize(sig, exp, prec))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithError {
    NegativeSqrt,
    Parse,
    EmptyInput,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::NegativeSqrt => write!(f, "square root of a negative value"),
            ArithError::Parse => write!(f, "malformed numeric literal"),
            ArithError::EmptyInput => write!(f, "empty input sequence"),
        }
    }
}

impl std::error::Error for ArithError {}

// --- elementary functions, used by the threshold calculators ---

/// ln(x) for x > 0 at roughly `prec` bits.
pub fn ln(x: &PrecReal, prec: u32) -> PrecReal {
    assert!(!x.is_zero() && !x.is_negative(), "ln domain");
    let work = prec + 32;
    // x = m * 2^e with m in [1, 2)
    let e = x.ilog2_floor();
    let m = x.scale2(-e).with_prec(work);
    let ln_m = ln_frac(&m, work);
    let ln2 = ln2(work);
    ln_m.add(&ln2.mul(&PrecReal::from_i64(e, work))).with_prec(prec)
}

/// ln(m) for m in [1, 2) via 2*atanh((m-1)/(m+1)).
fn ln_frac(m: &PrecReal, work: u32) -> PrecReal {
    let one = PrecReal::one(work);
    let z = m.sub(&one).div_prec(&m.add(&one), work);
    let z2 = z.mul(&z);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&z2);
        k += 2;
        let add = term.div_prec(&PrecReal::from_u64(k, work), work);
        if add.is_zero() || add.ilog2_floor() < -(work as i64) {
            break;
        }
        sum = sum.add(&add);
    }
    sum.scale2(1)
}

pub fn ln2(work: u32) -> PrecReal {
    // ln 2 = 2 atanh(1/3)
    let third = PrecReal::one(work).div_prec(&PrecReal::from_u64(3, work), work);
    let z2 = third.mul(&third);
    let mut term = third.clone();
    let mut sum = third;
    let mut k = 1u64;
    loop {
        term = term.mul(&z2);
        k += 2;
        let add = term.div_prec(&PrecReal::from_u64(k, work), work);
        if add.is_zero() || add.ilog2_floor() < -(work as i64) {
            break;
        }
        sum = sum.add(&add);
    }
    sum.scale2(1)
}

/// log2(x) at roughly `prec` bits.
pub fn log2(x: &PrecReal, prec: u32) -> PrecReal {
    let work = prec + 32;
    let e = x.ilog2_floor();
    let m = x.scale2(-e).with_prec(work);
    let r = ln_frac(&m, work).div_prec(&ln2(work), work);
    r.add(&PrecReal::from_i64(e, work)).with_prec(prec)
}

/// 2^t at roughly `prec` bits.
pub fn exp2(t: &PrecReal, prec: u32) -> PrecReal {
    let work = prec + 32;
    let n = t.floor_int();
    let n_i64 = i64::try_from(&n).expect("exp2 exponent out of range");
    let frac = t.sub_exact(&PrecReal::from_bigint(&n, work)).with_prec(work);
    // 2^frac = exp(frac * ln 2), frac in [0, 1)
    let z = frac.mul(&ln2(work));
    let mut term = PrecReal::one(work);
    let mut sum = PrecReal::one(work);
    let mut k = 1u64;
    loop {
        term = term.mul(&z).div_prec(&PrecReal::from_u64(k, work), work);
        if term.is_zero() || term.ilog2_floor() < -(work as i64) {
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    sum.scale2(n_i64).with_prec(prec)
}
