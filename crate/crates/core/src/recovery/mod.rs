//! Regression-recovery solvers: ELO, LBR, JIRSS, IHDR, MIRR, MIRR-C, and the
//! single-call mixed recovery.
//!
//! All solvers share the failure discipline: any internal inconsistency
//! (non-integer rescaled relation, uncovered index, inexact division, failed
//! re-verification) surfaces as a structured [`Failure`]; no code path turns
//! an inconsistency into a returned estimate.

mod continuous;
mod discrete;
pub mod io;

pub use continuous::{ihdr, lbr, mirr_c, mixed_ira_only};
pub use discrete::{decode_elo_short_vector, elo, jirss, mirr};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::time::Instant;

use crate::arith::{PrecReal, Rational};
use crate::counters::Counters;
use crate::relation::{screen_rational_independence, PrecisionPolicy, RelationError, ScreenOutcome};

/// Screened irrational support `a_1, ..., a_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    values: Vec<PrecReal>,
    includes_one: bool,
}

#[derive(Clone, Debug)]
pub enum SupportError {
    Empty,
    ZeroValue,
    DuplicateValue,
    Dependent { relation: Vec<BigInt> },
    Relation(RelationError),
}

impl fmt::Display for SupportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportError::Empty => write!(f, "empty support"),
            SupportError::ZeroValue => write!(f, "support contains zero"),
            SupportError::DuplicateValue => write!(f, "support values must be pairwise distinct"),
            SupportError::Dependent { relation } => {
                write!(f, "support failed the rational-independence screen: relation {:?}", relation)
            }
            SupportError::Relation(e) => write!(f, "screen error: {}", e),
        }
    }
}

impl std::error::Error for SupportError {}

impl SupportSet {
    /// Screens `values` (with 1 appended when `include_one`) for rational
    /// independence before accepting them.
    pub fn screened(
        values: Vec<PrecReal>,
        include_one: bool,
        policy: &PrecisionPolicy,
    ) -> Result<Self, SupportError> {
        if values.is_empty() {
            return Err(SupportError::Empty);
        }
        if values.iter().any(|v| v.is_zero()) {
            return Err(SupportError::ZeroValue);
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if values[i] == values[j] {
                    return Err(SupportError::DuplicateValue);
                }
            }
        }
        let mut screen_input = values.clone();
        if include_one {
            screen_input.push(PrecReal::one(policy.working_bits));
        }
        if screen_input.len() >= 2 {
            match screen_rational_independence(&screen_input, policy).map_err(SupportError::Relation)? {
                ScreenOutcome::IndependentUpToBound { .. } => {}
                ScreenOutcome::DependentWithRelation(rel) => {
                    return Err(SupportError::Dependent { relation: rel.coeffs });
                }
            }
        }
        Ok(SupportSet { values, includes_one: include_one })
    }

    /// Square roots of the first `r` squarefree integers >= 2 at `prec` bits,
    /// re-screened at construction. Rationally independent together with 1.
    pub fn default_square_roots(r: usize, prec: u32, policy: &PrecisionPolicy) -> Result<Self, SupportError> {
        let mut values = Vec::with_capacity(r);
        let mut k = 2u64;
        while values.len() < r {
            if is_squarefree(k) {
                let v = PrecReal::from_u64(k, prec.max(64))
                    .sqrt(prec)
                    .expect("positive");
                values.push(v);
            }
            k += 1;
        }
        Self::screened(values, true, policy)
    }

    pub fn values(&self) -> &[PrecReal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn includes_one(&self) -> bool {
        self.includes_one
    }
}

fn is_squarefree(k: u64) -> bool {
    let mut d = 2u64;
    let mut k = k;
    while d * d <= k {
        if k % (d * d) == 0 {
            return false;
        }
        while k % d == 0 {
            k /= d;
        }
        d += 1;
    }
    true
}

/// Entry of a recovered (or planted) feature vector: a rational `K/Q` in
/// lowest terms, or an index into the instance's [`SupportSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportValue {
    Rational(Rational),
    Irrational(usize),
}

impl SupportValue {
    pub fn zero() -> Self {
        SupportValue::Rational(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SupportValue::Rational(r) if r.is_zero())
    }

    /// The value as an exact rational, resolving irrational slots to their
    /// dyadic stand-ins from `support`.
    pub fn as_rational(&self, support: Option<&SupportSet>) -> Rational {
        match self {
            SupportValue::Rational(r) => r.clone(),
            SupportValue::Irrational(j) => {
                let s = support.expect("irrational slot requires a support set");
                prec_to_rational(&s.values()[*j])
            }
        }
    }
}

impl fmt::Display for SupportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            SupportValue::Irrational(j) => write!(f, "a{}", j + 1),
        }
    }
}

/// Exact conversion of a dyadic value to a rational.
pub fn prec_to_rational(x: &PrecReal) -> Rational {
    let sig = x.significand().clone();
    let e = x.exponent();
    if e >= 0 {
        Rational::new(sig << e as usize, BigInt::one())
    } else {
        Rational::new(sig, BigInt::one() << (-e) as usize)
    }
}

/// Structured solver failure: which stage gave up and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub stage: String,
    pub reason: String,
}

impl Failure {
    pub fn new(stage: &str, reason: impl Into<String>) -> Self {
        Failure { stage: stage.into(), reason: reason.into() }
    }

    pub fn nested(stage: &str, inner: Failure) -> Self {
        Failure { stage: format!("{}/{}", stage, inner.stage), reason: inner.reason }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.reason)
    }
}

/// Outcome bundle for one recovery run.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub estimate: Result<Vec<SupportValue>, Failure>,
    /// Exact equality against the planted truth, when one is known.
    pub exact_match: Option<bool>,
    pub counters: Counters,
    pub wall_time_ms: f64,
}

impl RecoveryReport {
    pub fn from_run<F>(beta_true: Option<&[SupportValue]>, run: F) -> Self
    where
        F: FnOnce(&mut Counters) -> Result<Vec<SupportValue>, Failure>,
    {
        let mut counters = Counters::new();
        let start = Instant::now();
        let estimate = run(&mut counters);
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let exact_match = beta_true.map(|truth| match &estimate {
            Ok(est) => est.as_slice() == truth,
            Err(_) => false,
        });
        RecoveryReport { estimate, exact_match, counters, wall_time_ms }
    }
}

pub(crate) fn ceil_log2_usize(p: usize) -> u32 {
    debug_assert!(p >= 1);
    (p.max(1)).next_power_of_two().trailing_zeros()
}

pub(crate) fn isqrt_ceil(n: usize) -> BigInt {
    let r = BigInt::from(n).sqrt();
    if &r * &r == BigInt::from(n) {
        r
    } else {
        r + 1
    }
}

/// Smallest integer >= x.
pub fn ceil_to_int(x: &PrecReal) -> BigInt {
    -(x.neg().floor_int())
}

/// `max_i |y_i - sum_j x_ij beta_j|` over exact rationals.
pub(crate) fn residual_inf_norm(
    y: &[Rational],
    x: &[Vec<Rational>],
    beta: &[Rational],
) -> Rational {
    let mut worst = Rational::zero();
    for (yi, row) in y.iter().zip(x) {
        let mut acc = Rational::zero();
        for (xij, bj) in row.iter().zip(beta) {
            if !bj.is_zero() {
                acc += xij * bj;
            }
        }
        let r = (yi - acc).abs();
        if r > worst {
            worst = r;
        }
    }
    worst
}

pub(crate) fn beta_as_rationals(beta: &[SupportValue], support: Option<&SupportSet>) -> Vec<Rational> {
    beta.iter().map(|b| b.as_rational(support)).collect()
}

/// Verification tolerance "exact at working precision":
/// `2^-tol_bits * max(1, ||y||_inf)`. Instances whose planted identity is not
/// dyadic-representable (e.g. Q = 3) carry construction rounding far below
/// this, while any wrong slot shifts the residual by at least `X_ij / q_hat`.
pub(crate) fn working_precision_bound(y: &[Rational], tol_bits: u32) -> Rational {
    let mut scale = Rational::one();
    for v in y {
        let a = v.abs();
        if a > scale {
            scale = a;
        }
    }
    scale / Rational::new(BigInt::one() << tol_bits as usize, BigInt::one())
}

pub(crate) fn bigint_rows_to_rational(x: &[Vec<BigInt>]) -> Vec<Vec<Rational>> {
    x.iter()
        .map(|row| row.iter().map(|v| Rational::new(v.clone(), BigInt::one())).collect())
        .collect()
}

pub(crate) fn prec_rows_to_rational(x: &[Vec<PrecReal>]) -> Vec<Vec<Rational>> {
    x.iter().map(|row| row.iter().map(prec_to_rational).collect()).collect()
}

pub(crate) fn prec_vec_to_rational(y: &[PrecReal]) -> Vec<Rational> {
    y.iter().map(prec_to_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sqrt_prec;

    #[test]
    fn default_supports_screen_clean() {
        let pol = PrecisionPolicy::for_relation(4, 24);
        let s = SupportSet::default_square_roots(3, 320, &pol).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.includes_one());
        // sqrt2, sqrt3, sqrt5
        let v0 = s.values()[0].mul_exact(&s.values()[0]);
        assert!(v0.sub_exact(&PrecReal::from_u64(2, 64)).abs_lt_pow2(-300));
    }

    #[test]
    fn dependent_support_rejected() {
        let pol = PrecisionPolicy::for_relation(4, 24);
        let w = 320;
        let r2 = sqrt_prec(&PrecReal::from_u64(2, w), w).unwrap();
        let two = PrecReal::from_u64(2, w);
        // {2 - sqrt2, sqrt2} is fine alone but dependent together with 1
        let vals = vec![two.sub_exact(&r2), r2];
        assert!(SupportSet::screened(vals.clone(), false, &pol).is_ok());
        assert!(matches!(
            SupportSet::screened(vals, true, &pol),
            Err(SupportError::Dependent { .. })
        ));
    }

    #[test]
    fn squarefree_sequence() {
        let seq: Vec<u64> = (2..20).filter(|&k| is_squarefree(k)).collect();
        assert_eq!(seq, vec![2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2_usize(1), 0);
        assert_eq!(ceil_log2_usize(2), 1);
        assert_eq!(ceil_log2_usize(3), 2);
        assert_eq!(ceil_log2_usize(15), 4);
        assert_eq!(ceil_log2_usize(16), 4);
    }
}
