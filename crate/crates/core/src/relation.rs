//! PSLQ integer relation detection over precision-tracked reals, relation
//! verification, and rational-independence screening of candidate supports.
//!
//! The implementation is the standard one-level PSLQ with gamma = 2/sqrt(3),
//! run entirely in [`PrecReal`] arithmetic at the policy's working precision.
//! A returned `NotFound` is a *bounded* certificate (no relation of norm
//! below the certified bound), never a claim of true independence: finite
//! precision cannot prove independence.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::PrecReal;

/// Nonzero integer vector `m` with the residual `|<b, m>|` observed at the
/// working precision.
#[derive(Clone, Debug)]
pub struct Relation {
    pub coeffs: Vec<BigInt>,
    pub residual: PrecReal,
}

impl Relation {
    pub fn norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Finite-precision stand-in for exact real arithmetic: how many bits to
/// compute with, when to call a residual zero, and when to give up.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub working_bits: u32,
    pub detect_tolerance_bits: u32,
    pub max_iterations: u64,
}

impl PrecisionPolicy {
    /// Default policy for a relation of expected coefficient size `2^B` in
    /// dimension `d`: `working = ceil(1.5 d (B+16))`, detection at half the
    /// working precision.
    pub fn for_relation(dim: usize, coeff_bits: u32) -> Self {
        let working = (3 * dim as u64 * (coeff_bits as u64 + 16)).div_ceil(2);
        let working = working.clamp(64, u32::MAX as u64) as u32;
        PrecisionPolicy {
            working_bits: working,
            detect_tolerance_bits: working / 2,
            max_iterations: 1000 + 25 * (dim as u64) * (dim as u64) * (coeff_bits as u64 + 16),
        }
    }

    /// As [`for_relation`](Self::for_relation) but never below the precision
    /// the input data carries.
    pub fn for_relation_with_data(dim: usize, coeff_bits: u32, data_bits: u32) -> Self {
        let base = Self::for_relation(dim, coeff_bits);
        let working = base.working_bits.max(data_bits + 64);
        PrecisionPolicy {
            working_bits: working,
            detect_tolerance_bits: working / 2,
            max_iterations: base.max_iterations,
        }
    }

    pub fn doubled(&self) -> Self {
        PrecisionPolicy {
            working_bits: self.working_bits * 2,
            detect_tolerance_bits: self.working_bits,
            max_iterations: self.max_iterations * 2,
        }
    }

    /// Norm bound implied by the policy: the inverse of the default sizing
    /// formula, i.e. the largest coefficient size this policy was budgeted
    /// for.
    pub fn norm_bound(&self, dim: usize) -> BigInt {
        let b = (2 * self.working_bits as u64) / (3 * dim.max(2) as u64);
        let b = b.saturating_sub(16).max(8);
        BigInt::one() << b as usize
    }
}

#[derive(Clone, Debug)]
pub enum PslqOutcome {
    Found(Relation),
    /// No relation with norm below `certified_norm_bound` exists for the
    /// input values (at working precision).
    NotFound { certified_norm_bound: BigInt },
}

#[derive(Clone, Debug)]
pub struct PslqResult {
    pub outcome: PslqOutcome,
    pub iterations: u64,
}

#[derive(Clone, Debug)]
pub enum RelationError {
    /// Residuals stagnate above tolerance while the norm bound still grows;
    /// retry with a larger working precision.
    PrecisionExhausted { iterations: u64 },
    Usage(String),
}

impl fmt::Display for RelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationError::PrecisionExhausted { iterations } => {
                write!(f, "precision exhausted after {} iterations", iterations)
            }
            RelationError::Usage(m) => write!(f, "usage error: {}", m),
        }
    }
}

impl std::error::Error for RelationError {}

/// `true` iff `|<b, m>| < 2^-tolerance_bits * max|b_i|`, decided exactly over
/// the stored dyadics.
pub fn verify_relation(b: &[PrecReal], m: &[BigInt], tolerance_bits: u32) -> Result<bool, RelationError> {
    if b.len() != m.len() {
        return Err(RelationError::Usage("length mismatch between values and relation".into()));
    }
    if m.iter().all(|c| c.is_zero()) {
        return Err(RelationError::Usage("relation vector must be nonzero".into()));
    }
    let ip = inner_product_exact(b, m);
    let max_b = b
        .iter()
        .map(|x| x.abs())
        .max_by(|a, c| a.cmp_exact(c))
        .ok_or_else(|| RelationError::Usage("empty input".into()))?;
    Ok(ip.abs().cmp_exact(&max_b.scale2(-(tolerance_bits as i64))) == std::cmp::Ordering::Less)
}

/// Exact dyadic inner product `<b, m>`.
pub fn inner_product_exact(b: &[PrecReal], m: &[BigInt]) -> PrecReal {
    let mut acc = PrecReal::zero(64);
    for (x, c) in b.iter().zip(m) {
        if !c.is_zero() {
            acc = acc.add_exact(&x.mul_bigint_exact(c));
        }
    }
    acc
}

/// PSLQ integer relation search.
///
/// Preconditions: `len(b) >= 2` and no entry exactly zero (strip zeros with
/// index bookkeeping first; a set containing zero is trivially dependent).
pub fn pslq_find_relation(b: &[PrecReal], policy: &PrecisionPolicy) -> Result<PslqResult, RelationError> {
    let n = b.len();
    if n < 2 {
        return Err(RelationError::Usage("need at least two values".into()));
    }
    if b.iter().any(|x| x.is_zero()) {
        return Err(RelationError::Usage("zero entry in input".into()));
    }
    if policy.detect_tolerance_bits >= policy.working_bits {
        return Err(RelationError::Usage("detect_tolerance_bits must be below working_bits".into()));
    }
    let w = policy.working_bits;
    let x: Vec<PrecReal> = b.iter().map(|v| v.with_prec(w)).collect();

    // partial norms s_k = sqrt(sum_{j>=k} x_j^2)
    let mut sumsq = vec![PrecReal::zero(w); n + 1];
    for k in (0..n).rev() {
        sumsq[k] = sumsq[k + 1].add(&x[k].mul(&x[k]));
    }
    let s: Vec<PrecReal> = (0..n).map(|k| sumsq[k].sqrt(w).expect("nonnegative")).collect();
    let norm = s[0].clone();
    let mut y: Vec<PrecReal> = x.iter().map(|v| v.div_prec(&norm, w)).collect();
    let s: Vec<PrecReal> = s.iter().map(|v| v.div_prec(&norm, w)).collect();

    // H is n x (n-1), lower trapezoidal
    let mut h = vec![vec![PrecReal::zero(w); n - 1]; n];
    for j in 0..n - 1 {
        h[j][j] = s[j + 1].div_prec(&s[j], w);
        for i in j + 1..n {
            let denom = s[j].mul(&s[j + 1]);
            h[i][j] = y[i].mul(&y[j]).neg().div_prec(&denom, w);
        }
    }

    let mut bmat: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    // full initial Hermite reduction
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            reduce_entry(&mut h, &mut y, &mut bmat, i, j, w);
        }
    }

    let gamma = {
        let root3 = PrecReal::from_u64(3, w).sqrt(w).expect("positive");
        PrecReal::from_u64(2, w).div_prec(&root3, w)
    };
    let mut gamma_pows = Vec::with_capacity(n - 1);
    let mut g = gamma.clone();
    for _ in 0..n - 1 {
        gamma_pows.push(g.clone());
        g = g.mul(&gamma);
    }

    let norm_target = policy.norm_bound(n);
    let mut iterations: u64 = 0;

    loop {
        // detection first: a vanished y_j certifies B column j as a relation
        if let Some(j) = (0..n).find(|&j| y[j].abs_lt_pow2(-(policy.detect_tolerance_bits as i64))) {
            let m: Vec<BigInt> = (0..n).map(|i| bmat[i][j].clone()).collect();
            if m.iter().all(|c| c.is_zero()) {
                return Err(RelationError::PrecisionExhausted { iterations });
            }
            if verify_relation(b, &m, policy.detect_tolerance_bits)? {
                let residual = inner_product_exact(b, &m).abs().with_prec(w);
                return Ok(PslqResult {
                    outcome: PslqOutcome::Found(Relation { coeffs: m, residual }),
                    iterations,
                });
            }
            return Err(RelationError::PrecisionExhausted { iterations });
        }

        // certified lower bound on any relation norm: 1 / max|H_jj|
        let mut max_diag = PrecReal::zero(w);
        for (j, row) in h.iter().enumerate().take(n - 1) {
            let v = row[j].abs();
            if max_diag.lt(&v) {
                max_diag = v;
            }
        }
        if max_diag.is_zero() {
            return Err(RelationError::PrecisionExhausted { iterations });
        }
        let bound_reached = {
            // 1/max_diag > target  <=>  max_diag * target < 1
            let t = max_diag.mul(&PrecReal::from_bigint(&norm_target, w));
            t.lt(&PrecReal::one(w))
        };
        if bound_reached {
            return Ok(PslqResult {
                outcome: PslqOutcome::NotFound { certified_norm_bound: norm_target },
                iterations,
            });
        }

        if iterations >= policy.max_iterations {
            let inv = PrecReal::one(w).div_prec(&max_diag, w);
            let certified = inv.floor_int().max(BigInt::one());
            return Ok(PslqResult {
                outcome: PslqOutcome::NotFound { certified_norm_bound: certified },
                iterations,
            });
        }
        iterations += 1;

        // pivot: maximize gamma^j * |H_jj|
        let mut r = 0usize;
        let mut best = PrecReal::zero(w);
        for j in 0..n - 1 {
            let v = gamma_pows[j].mul(&h[j][j].abs());
            if best.lt(&v) {
                best = v;
                r = j;
            }
        }

        y.swap(r, r + 1);
        h.swap(r, r + 1);
        bmat.iter_mut().for_each(|row| row.swap(r, r + 1));

        if r + 1 < n - 1 {
            // corner fix: rotate columns r, r+1 back to lower-trapezoidal form
            let t3 = h[r][r].clone();
            let t4 = h[r][r + 1].clone();
            let t0 = t3.mul(&t3).add(&t4.mul(&t4)).sqrt(w).expect("nonnegative");
            if t0.is_zero() {
                return Err(RelationError::PrecisionExhausted { iterations });
            }
            let t1 = t3.div_prec(&t0, w);
            let t2 = t4.div_prec(&t0, w);
            for row in h.iter_mut().skip(r) {
                let a = row[r].clone();
                let c = row[r + 1].clone();
                row[r] = t1.mul(&a).add(&t2.mul(&c));
                row[r + 1] = t1.mul(&c).sub(&t2.mul(&a));
            }
        }

        // restricted Hermite reduction after the swap
        for i in r.max(1)..n {
            let top = i.min(r + 1).min(n - 2);
            for j in (0..=top).rev() {
                if j < i {
                    reduce_entry(&mut h, &mut y, &mut bmat, i, j, w);
                }
            }
        }
    }
}

fn reduce_entry(h: &mut [Vec<PrecReal>], y: &mut [PrecReal], bmat: &mut [Vec<BigInt>], i: usize, j: usize, w: u32) {
    if h[j][j].is_zero() {
        return;
    }
    let t = h[i][j].div_prec(&h[j][j], w).round_to_int();
    if t.is_zero() {
        return;
    }
    let tr = PrecReal::from_bigint(&t, w);
    y[j] = y[j].add(&tr.mul(&y[i]));
    for k in 0..=j {
        let d = tr.mul(&h[j][k]);
        h[i][k] = h[i][k].sub(&d);
    }
    for row in bmat.iter_mut() {
        let d = &t * &row[i];
        row[j] += d;
    }
}

/// Outcome of screening a candidate support set for rational independence.
#[derive(Clone, Debug)]
pub enum ScreenOutcome {
    /// No relation with norm under the bound exists numerically.
    IndependentUpToBound { bound: BigInt },
    DependentWithRelation(Relation),
}

/// PSLQ with the retry ladder: on precision exhaustion the policy is
/// doubled, at most three times.
pub fn pslq_with_retries(
    b: &[PrecReal],
    policy: &PrecisionPolicy,
    iterations_out: &mut u64,
) -> Result<PslqResult, RelationError> {
    let mut current = *policy;
    let mut last_err = None;
    for _ in 0..4 {
        match pslq_find_relation(b, &current) {
            Ok(res) => {
                *iterations_out += res.iterations;
                return Ok(res);
            }
            Err(RelationError::PrecisionExhausted { iterations }) => {
                *iterations_out += iterations;
                last_err = Some(RelationError::PrecisionExhausted { iterations });
                current = current.doubled();
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

/// Numeric screen for rational independence; a `Dependent` verdict carries
/// the found relation, an `Independent` verdict is only a bounded
/// certificate.
pub fn screen_rational_independence(
    values: &[PrecReal],
    policy: &PrecisionPolicy,
) -> Result<ScreenOutcome, RelationError> {
    if values.is_empty() {
        return Err(RelationError::Usage("empty support".into()));
    }
    if values.iter().any(|v| v.is_zero()) {
        return Err(RelationError::Usage("zero entry: a set containing 0 is dependent".into()));
    }
    if values.len() == 1 {
        return Ok(ScreenOutcome::IndependentUpToBound { bound: policy.norm_bound(2) });
    }
    let mut iters = 0u64;
    let res = pslq_with_retries(values, policy, &mut iters)?;
    let bound = policy.norm_bound(values.len());
    match res.outcome {
        PslqOutcome::Found(rel) => {
            if rel.norm_sq() <= &bound * &bound {
                Ok(ScreenOutcome::DependentWithRelation(rel))
            } else {
                // only an enormous (precision-artifact) relation exists
                Ok(ScreenOutcome::IndependentUpToBound { bound })
            }
        }
        PslqOutcome::NotFound { certified_norm_bound } => {
            Ok(ScreenOutcome::IndependentUpToBound { bound: certified_norm_bound.min(bound) })
        }
    }
}
