//! Solvers for integer-valued measurement matrices: ELO (extended
//! Lagarias–Odlyzko), JIRSS (joint integer relation and subset sum), and the
//! two-stage MIRR for mixed rational/irrational supports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;

use super::{
    beta_as_rationals, bigint_rows_to_rational, ceil_log2_usize, isqrt_ceil,
    prec_vec_to_rational, residual_inf_norm, working_precision_bound, Failure, SupportSet,
    SupportValue,
};
use crate::arith::{gcd_vector, PrecReal, Rational};
use crate::counters::Counters;
use crate::lattice::{lll_reduce, Delta, LatticeBasis};
use crate::relation::{pslq_with_retries, PrecisionPolicy, PslqOutcome};
use crate::rng::uniform_bigint_range;
use crate::subsetsum::{default_scale, solve_multichannel};

/// Extended Lagarias–Odlyzko recovery of an integer feature vector from
/// `Y = X beta + W` with `|beta_i| <= r_hat`, `|W_i| <= w_hat`.
///
/// Returns the integer estimate; the translated short vector is decoded with
/// signed gcd normalization and the result re-verified against `Y` exactly.
pub fn elo(
    y: &[BigInt],
    x: &[Vec<BigInt>],
    r_hat: &BigInt,
    w_hat: &BigInt,
    rng: &mut ChaCha8Rng,
    counters: &mut Counters,
) -> Result<Vec<BigInt>, Failure> {
    let stage = "elo";
    let n = y.len();
    let p = x.first().map_or(0, |r| r.len());
    if n == 0 || p == 0 || x.len() != n || x.iter().any(|r| r.len() != p) {
        return Err(Failure::new(stage, "input shape mismatch"));
    }
    if r_hat < &BigInt::one() {
        return Err(Failure::new(stage, "r_hat must be >= 1"));
    }
    // the analysis needs w_hat >= max(||W||_inf, 1)
    let w_inf = if w_hat < &BigInt::one() { BigInt::one() } else { w_hat.clone() };

    let log_p = BigInt::from(ceil_log2_usize(p));
    let lo = r_hat + 1;
    let hi = r_hat + r_hat + &log_p;
    let z: Vec<BigInt> = (0..p).map(|_| uniform_bigint_range(rng, &lo, &hi)).collect();

    let y1: Vec<BigInt> = (0..n)
        .map(|i| {
            let shift: BigInt = x[i].iter().zip(&z).map(|(a, b)| a * b).sum();
            &y[i] + shift
        })
        .collect();
    let three = BigInt::from(3);
    let y2: Vec<BigInt> = y1
        .iter()
        .map(|v| if v.abs() < three { three.clone() } else { v.clone() })
        .collect();

    // m = 2^(n + ceil(p/2) + 3) * p * (r_hat ceil(sqrt p) + w_inf ceil(sqrt n))
    let m: BigInt = (BigInt::from(p) * (r_hat * isqrt_ceil(p) + &w_inf * isqrt_ceil(n)))
        << (n + p.div_ceil(2) + 3);

    let dim = 2 * n + p;
    let mut columns = vec![vec![BigInt::zero(); dim]; dim];
    for j in 0..p {
        let col = &mut columns[j];
        for i in 0..n {
            col[i] = &m * &x[i][j];
        }
        col[n + j] = BigInt::one();
    }
    for i in 0..n {
        columns[p + i][i] = -(&m * &y2[i]);
    }
    for i in 0..n {
        let col = &mut columns[p + n + i];
        col[i] = m.clone();
        col[n + p + i] = BigInt::one();
    }

    let basis = LatticeBasis::new(columns)
        .map_err(|e| Failure::new(stage, format!("lll_degenerate: {}", e)))?;
    counters.lll_invocations += 1;
    let reduced =
        lll_reduce(&basis, Delta::DEFAULT).map_err(|e| Failure::new(stage, format!("lll_degenerate: {}", e)))?;

    let beta = decode_elo_short_vector(reduced.column(0), n, p, &z)?;

    // unconditional exact re-verification: ||Y - X beta||_inf <= w_inf
    for (yi, row) in y.iter().zip(x) {
        let fit: BigInt = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
        if (yi - fit).abs() > w_inf {
            return Err(Failure::new(stage, "verification"));
        }
    }
    Ok(beta)
}

/// Decode step of ELO (steps 6-7): signed gcd of the middle block, exact
/// division, translation back by `z`.
pub fn decode_elo_short_vector(
    short: &[BigInt],
    n: usize,
    p: usize,
    z: &[BigInt],
) -> Result<Vec<BigInt>, Failure> {
    let stage = "elo";
    let v = &short[n..n + p];
    let g = gcd_vector(v).map_err(|_| Failure::new(stage, "empty short vector"))?;
    if g.is_zero() {
        return Err(Failure::new(stage, "gcd_zero"));
    }
    // the translated vector beta = beta* + z is entrywise positive, so the
    // sign of any nonzero coordinate tells the sign of the multiplier
    let sign_neg = v.iter().find(|c| !c.is_zero()).map(|c| c.is_negative()).unwrap_or(false);
    let div = if sign_neg { -g } else { g };
    let mut beta = Vec::with_capacity(p);
    for (c, zi) in v.iter().zip(z) {
        let (q, r) = c.div_rem(&div);
        if !r.is_zero() {
            return Err(Failure::new(stage, "inexact_division"));
        }
        beta.push(q - zi);
    }
    Ok(beta)
}

pub(super) struct JirssDecode {
    /// Per feature index: the support index it decoded to, or `None` for a
    /// slot no channel covers (a rational slot in the mixed setting).
    pub assignments: Vec<Option<usize>>,
}

/// Shared JIRSS machinery: per-row integer relations, rescaling, and one
/// multi-channel subset-sum per support element.
pub(super) fn jirss_core(
    y: &[PrecReal],
    x: &[Vec<BigInt>],
    support: &SupportSet,
    with_one: bool,
    require_full_cover: bool,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
    stage: &str,
) -> Result<JirssDecode, Failure> {
    let n = y.len();
    let p = x.first().map_or(0, |r| r.len());
    if n == 0 || p == 0 || x.len() != n || x.iter().any(|r| r.len() != p) {
        return Err(Failure::new(stage, "input shape mismatch"));
    }
    let r = support.len();

    let mut theta = vec![vec![BigInt::zero(); n]; r]; // theta[j][i]
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue; // zero measurement: all channel coefficients are zero
        }
        let mut b = Vec::with_capacity(r + 2);
        b.push(yi.clone());
        b.extend(support.values().iter().cloned());
        if with_one {
            b.push(PrecReal::one(policy.working_bits));
        }
        let res = pslq_with_retries(&b, policy, &mut counters.pslq_iterations)
            .map_err(|e| Failure::new(stage, format!("pslq: {}", e)))?;
        let rel = match res.outcome {
            PslqOutcome::Found(rel) => rel,
            PslqOutcome::NotFound { .. } => {
                return Err(Failure::new(stage, "no_relation_found"));
            }
        };
        let b0 = &rel.coeffs[0];
        if b0.is_zero() {
            return Err(Failure::new(stage, "relation_not_integer"));
        }
        for j in 0..r {
            let num = -&rel.coeffs[j + 1];
            let (q, rem) = num.div_rem(b0);
            if !rem.is_zero() {
                return Err(Failure::new(stage, "relation_not_integer"));
            }
            theta[j][i] = q;
        }
        // the coefficient on the appended 1 carries the rational mass; it is
        // not needed for decoding but must still rescale to an integer
        if with_one {
            let num = -&rel.coeffs[r + 1];
            if !num.div_rem(b0).1.is_zero() {
                return Err(Failure::new(stage, "relation_not_integer"));
            }
        }
    }

    let m = default_scale(p, n);
    let mut assignments: Vec<Option<usize>> = vec![None; p];
    for (j, theta_j) in theta.iter().enumerate() {
        let e = solve_multichannel(theta_j, x, &m, counters)
            .map_err(|e| Failure::new(stage, format!("subset_sum[{}]: {}", j, e)))?;
        for (i, &bit) in e.iter().enumerate() {
            if bit == 1 {
                if assignments[i].is_some() {
                    return Err(Failure::new(stage, "uncovered_index"));
                }
                assignments[i] = Some(j);
            }
        }
    }
    if require_full_cover && assignments.iter().any(|a| a.is_none()) {
        return Err(Failure::new(stage, "uncovered_index"));
    }
    Ok(JirssDecode { assignments })
}

/// JIRSS recovery of an irrational-valued feature vector supported on `S`
/// from integer measurements.
pub fn jirss(
    y: &[PrecReal],
    x: &[Vec<BigInt>],
    support: &SupportSet,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage = "jirss";
    let decode = jirss_core(y, x, support, false, true, policy, counters, stage)?;
    let beta: Vec<SupportValue> = decode
        .assignments
        .iter()
        .map(|a| SupportValue::Irrational(a.expect("full cover enforced")))
        .collect();

    let yr = prec_vec_to_rational(y);
    let xr = bigint_rows_to_rational(x);
    let resid = residual_inf_norm(&yr, &xr, &beta_as_rationals(&beta, Some(support)));
    if resid > working_precision_bound(&yr, policy.detect_tolerance_bits) {
        return Err(Failure::new(stage, "verification"));
    }
    Ok(beta)
}

/// Two-stage mixed recovery for integer measurements: JIRSS (with 1 adjoined
/// to the support) for the irrational slots, then ELO on the residual for the
/// Q-rational slots.
#[allow(clippy::too_many_arguments)]
pub fn mirr(
    y: &[PrecReal],
    x: &[Vec<BigInt>],
    r_hat: &BigInt,
    q_hat: &BigInt,
    support: &SupportSet,
    policy: &PrecisionPolicy,
    rng: &mut ChaCha8Rng,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage1 = "mirr.stage1";
    let stage2 = "mirr.stage2";
    if !support.includes_one() {
        return Err(Failure::new("mirr", "support must be screened together with 1"));
    }
    if q_hat < &BigInt::one() {
        return Err(Failure::new("mirr", "q_hat must be >= 1"));
    }
    let n = y.len();
    let p = x.first().map_or(0, |r| r.len());

    // stage 1 on (q_hat Y, q_hat X, S)
    let y_scaled: Vec<PrecReal> = y.iter().map(|v| v.mul_bigint_exact(q_hat)).collect();
    let x_scaled: Vec<Vec<BigInt>> = x.iter().map(|row| row.iter().map(|v| v * q_hat).collect()).collect();
    let decode = jirss_core(&y_scaled, &x_scaled, support, true, false, policy, counters, stage1)?;

    // residual carries only the rational mass
    let mut y_tilde = Vec::with_capacity(n);
    for (i, yi) in y.iter().enumerate() {
        let mut acc = yi.clone();
        for (j, a) in decode.assignments.iter().enumerate() {
            if let Some(k) = a {
                let term = support.values()[*k].mul_bigint_exact(&x[i][j]);
                acc = acc.sub_exact(&term);
            }
        }
        y_tilde.push(acc);
    }

    let free_cols: Vec<usize> = (0..p).filter(|&j| decode.assignments[j].is_none()).collect();

    // integrality of q_hat * y_tilde, at the policy's tolerance
    let mut y2 = Vec::with_capacity(n);
    for yt in &y_tilde {
        let t = yt.mul_bigint_exact(q_hat);
        let rounded = t.round_to_int();
        let err = t.sub_exact(&PrecReal::from_bigint(&rounded, 64));
        if !err.abs_lt_pow2(-((policy.working_bits / 2) as i64)) {
            return Err(Failure::new(stage2, "y_not_integer"));
        }
        y2.push(rounded);
    }

    let mut beta: Vec<SupportValue> = decode
        .assignments
        .iter()
        .map(|a| match a {
            Some(k) => SupportValue::Irrational(*k),
            None => SupportValue::zero(),
        })
        .collect();

    if !free_cols.is_empty() {
        let x_tilde: Vec<Vec<BigInt>> =
            x.iter().map(|row| free_cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let r_hat_elo = q_hat * r_hat;
        let beta2 = elo(&y2, &x_tilde, &r_hat_elo, &BigInt::zero(), rng, counters)
            .map_err(|f| Failure::nested(stage2, f))?;
        for (slot, val) in free_cols.iter().zip(&beta2) {
            if val.abs() > r_hat_elo {
                return Err(Failure::new(stage2, "non_q_rational"));
            }
            beta[*slot] = SupportValue::Rational(Rational::new(val.clone(), q_hat.clone()));
        }
    } else {
        // all-irrational: the residual must vanish
        if y2.iter().any(|v| !v.is_zero()) {
            return Err(Failure::new(stage2, "y_not_integer"));
        }
    }

    let yr = prec_vec_to_rational(y);
    let xr = bigint_rows_to_rational(x);
    let resid = residual_inf_norm(&yr, &xr, &beta_as_rationals(&beta, Some(support)));
    if resid > working_precision_bound(&yr, policy.detect_tolerance_bits) {
        return Err(Failure::new("mirr", "verification"));
    }
    Ok(beta)
}
