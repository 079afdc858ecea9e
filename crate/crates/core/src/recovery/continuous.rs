//! Solvers for continuous (real-valued) measurements: LBR (truncate and run
//! ELO), IHDR, MIRR-C, and the single-relation mixed recovery.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;

use super::discrete::elo;
use super::{
    beta_as_rationals, ceil_log2_usize, ceil_to_int, prec_rows_to_rational, prec_to_rational,
    prec_vec_to_rational, residual_inf_norm, working_precision_bound, Failure, SupportSet,
    SupportValue,
};
use crate::arith::{PrecReal, Rational};
use crate::counters::Counters;
use crate::relation::{pslq_with_retries, PrecisionPolicy, PslqOutcome};

/// Lattice-based regression: truncate `Y`, `X` to `n_bits` fractional bits,
/// scale to integers, recover `q_hat * beta` with ELO, divide back.
#[allow(clippy::too_many_arguments)]
pub fn lbr(
    y: &[PrecReal],
    x: &[Vec<PrecReal>],
    n_bits: u32,
    q_hat: &BigInt,
    r_hat: &BigInt,
    w_hat: &PrecReal,
    rng: &mut ChaCha8Rng,
    counters: &mut Counters,
) -> Result<Vec<Rational>, Failure> {
    let stage = "lbr";
    let n = y.len();
    let p = x.first().map_or(0, |r| r.len());
    if n == 0 || p == 0 || x.len() != n || x.iter().any(|r| r.len() != p) {
        return Err(Failure::new(stage, "input shape mismatch"));
    }
    if q_hat < &BigInt::one() || r_hat < &BigInt::one() {
        return Err(Failure::new(stage, "q_hat and r_hat must be >= 1"));
    }
    if w_hat.is_negative() {
        return Err(Failure::new(stage, "w_hat must be nonnegative"));
    }

    let y_int: Vec<BigInt> = y
        .iter()
        .map(|v| v.truncate_to_bits(n_bits).scaled_to_int(n_bits).expect("truncated") * q_hat)
        .collect();
    let x_int: Vec<Vec<BigInt>> = x
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.truncate_to_bits(n_bits).scaled_to_int(n_bits).expect("truncated"))
                .collect()
        })
        .collect();

    // ELO noise estimate: 2 q_hat (2^N w_hat + r_hat p)
    let w_scaled = ceil_to_int(&w_hat.scale2(n_bits as i64));
    let w_elo: BigInt = (q_hat * (w_scaled + r_hat * BigInt::from(p))) << 1u32;
    let r_elo = q_hat * r_hat;

    let beta1 = elo(&y_int, &x_int, &r_elo, &w_elo, rng, counters).map_err(|f| Failure::nested(stage, f))?;

    let mut beta = Vec::with_capacity(p);
    for v in &beta1 {
        if v.abs() > r_elo {
            return Err(Failure::new(stage, "non_q_rational"));
        }
        beta.push(Rational::new(v.clone(), q_hat.clone()));
    }

    // ||Y - X beta||_inf <= w_hat + 2^(log2ceil(p) - N), exactly over rationals
    let slack_exp = ceil_log2_usize(p) as i64 - n_bits as i64;
    let bound = prec_to_rational(w_hat) + pow2_rational(slack_exp);
    let resid = residual_inf_norm(&prec_vec_to_rational(y), &prec_rows_to_rational(x), &beta);
    if resid > bound {
        return Err(Failure::new(stage, "verification"));
    }
    Ok(beta)
}

fn pow2_rational(e: i64) -> Rational {
    if e >= 0 {
        Rational::new(BigInt::one() << e as usize, BigInt::one())
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Irrational high-dimensional regression: one integer relation on
/// `(Y, {X_i a_j})` decodes the whole vector.
pub fn ihdr(
    y: &PrecReal,
    x: &[PrecReal],
    support: &SupportSet,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage = "ihdr";
    let p = x.len();
    let r = support.len();
    if p == 0 {
        return Err(Failure::new(stage, "empty measurement vector"));
    }
    if x.iter().any(|v| v.is_zero()) {
        return Err(Failure::new(stage, "zero_measurement"));
    }
    if y.is_zero() {
        // the b0 = 0 convention: output the zero vector
        return Ok(vec![SupportValue::zero(); p]);
    }

    let mut b = Vec::with_capacity(1 + p * r);
    b.push(y.clone());
    for xi in x {
        for a in support.values() {
            b.push(xi.mul_exact(a));
        }
    }
    let res = pslq_with_retries(&b, policy, &mut counters.pslq_iterations)
        .map_err(|e| Failure::new(stage, format!("pslq: {}", e)))?;
    let rel = match res.outcome {
        PslqOutcome::Found(rel) => rel,
        PslqOutcome::NotFound { .. } => return Err(Failure::new(stage, "no_relation_found")),
    };
    let b0 = &rel.coeffs[0];
    if b0.is_zero() {
        return Ok(vec![SupportValue::zero(); p]);
    }

    let mut beta = Vec::with_capacity(p);
    for i in 0..p {
        let mut hit: Option<usize> = None;
        for j in 0..r {
            let c = &rel.coeffs[1 + i * r + j];
            if c.is_zero() {
                continue;
            }
            if hit.is_some() {
                return Err(Failure::new(stage, "ambiguous_assignment"));
            }
            // the rescaled coefficient -c/b0 must be exactly 1
            if &(-c) != b0 {
                return Err(Failure::new(stage, "ambiguous_assignment"));
            }
            hit = Some(j);
        }
        match hit {
            Some(j) => beta.push(SupportValue::Irrational(j)),
            None => return Err(Failure::new(stage, "ambiguous_assignment")),
        }
    }

    let yr = [prec_to_rational(y)];
    let xr: Vec<Vec<Rational>> = vec![x.iter().map(prec_to_rational).collect()];
    let resid = residual_inf_norm(&yr, &xr, &beta_as_rationals(&beta, Some(support)));
    if resid > working_precision_bound(&yr, policy.detect_tolerance_bits) {
        return Err(Failure::new(stage, "verification"));
    }
    Ok(beta)
}

/// Single-relation mixed recovery (n = 1): one PSLQ call on
/// `(q_hat Y, {X_i a_j}, {X_i})` decodes both the irrational and the
/// Q-rational slots.
#[allow(clippy::too_many_arguments)]
pub fn mixed_ira_only(
    y: &PrecReal,
    x: &[PrecReal],
    q_hat: &BigInt,
    r_hat: &BigInt,
    support: &SupportSet,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage = "mixed_ira";
    let p = x.len();
    let r = support.len();
    if !support.includes_one() {
        return Err(Failure::new(stage, "support must be screened together with 1"));
    }
    if p == 0 {
        return Err(Failure::new(stage, "empty measurement vector"));
    }
    if x.iter().any(|v| v.is_zero()) {
        return Err(Failure::new(stage, "zero_measurement"));
    }
    if q_hat < &BigInt::one() || r_hat < &BigInt::one() {
        return Err(Failure::new(stage, "q_hat and r_hat must be >= 1"));
    }
    if y.is_zero() {
        return Ok(vec![SupportValue::zero(); p]);
    }

    let qy = y.mul_bigint_exact(q_hat);
    let mut b = Vec::with_capacity(1 + p * r + p);
    b.push(qy);
    for xi in x {
        for a in support.values() {
            b.push(xi.mul_exact(a));
        }
    }
    b.extend(x.iter().cloned());

    let res = pslq_with_retries(&b, policy, &mut counters.pslq_iterations)
        .map_err(|e| Failure::new(stage, format!("pslq: {}", e)))?;
    let rel = match res.outcome {
        PslqOutcome::Found(rel) => rel,
        PslqOutcome::NotFound { .. } => return Err(Failure::new(stage, "no_relation_found")),
    };
    let b0 = &rel.coeffs[0];
    if b0.is_zero() {
        return Err(Failure::new(stage, "relation_not_integer"));
    }

    let exact_div = |num: &BigInt| -> Result<BigInt, Failure> {
        let (q, rem) = (-num).div_rem(b0);
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Failure::new(stage, "relation_not_integer"))
        }
    };

    let mut beta = Vec::with_capacity(p);
    for i in 0..p {
        let mut hit: Option<usize> = None;
        for j in 0..r {
            let c = &rel.coeffs[1 + i * r + j];
            if c.is_zero() {
                continue;
            }
            if hit.is_some() {
                return Err(Failure::new(stage, "ambiguous_assignment"));
            }
            if &exact_div(c)? != q_hat {
                return Err(Failure::new(stage, "ambiguous_assignment"));
            }
            hit = Some(j);
        }
        let mass = exact_div(&rel.coeffs[1 + p * r + i])?;
        match hit {
            Some(j) => {
                if !mass.is_zero() {
                    return Err(Failure::new(stage, "ambiguous_assignment"));
                }
                beta.push(SupportValue::Irrational(j));
            }
            None => {
                if mass.abs() > q_hat * r_hat {
                    return Err(Failure::new(stage, "non_q_rational"));
                }
                beta.push(SupportValue::Rational(Rational::new(mass, q_hat.clone())));
            }
        }
    }

    let yr = [prec_to_rational(y)];
    let xr: Vec<Vec<Rational>> = vec![x.iter().map(prec_to_rational).collect()];
    let resid = residual_inf_norm(&yr, &xr, &beta_as_rationals(&beta, Some(support)));
    if resid > working_precision_bound(&yr, policy.detect_tolerance_bits) {
        return Err(Failure::new(stage, "verification"));
    }
    Ok(beta)
}

/// Mixed recovery for continuous measurements: per-row relations against
/// `S_i = {X_ij a_k} ∪ {X_ij}` recover the irrational slots, LBR on the
/// residual recovers the Q-rational slots.
#[allow(clippy::too_many_arguments)]
pub fn mirr_c(
    y: &[PrecReal],
    x: &[Vec<PrecReal>],
    n_bits: u32,
    r_hat: &BigInt,
    q_hat: &BigInt,
    support: &SupportSet,
    policy: &PrecisionPolicy,
    rng: &mut ChaCha8Rng,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage1 = "mirrc.stage1";
    let stage2 = "mirrc.stage2";
    if !support.includes_one() {
        return Err(Failure::new("mirrc", "support must be screened together with 1"));
    }
    let n = y.len();
    let p = x.first().map_or(0, |r| r.len());
    if n == 0 || p == 0 || x.len() != n || x.iter().any(|r| r.len() != p) {
        return Err(Failure::new("mirrc", "input shape mismatch"));
    }
    if q_hat < &BigInt::one() || r_hat < &BigInt::one() {
        return Err(Failure::new("mirrc", "q_hat and r_hat must be >= 1"));
    }
    let r = support.len();

    let mut combined: Option<Vec<Option<usize>>> = None;
    for (i, yi) in y.iter().enumerate() {
        if x[i].iter().any(|v| v.is_zero()) {
            return Err(Failure::new(stage1, "zero_measurement"));
        }
        if yi.is_zero() {
            continue; // a zero measurement carries no support information
        }
        let qy = yi.mul_bigint_exact(q_hat);
        let mut b = Vec::with_capacity(1 + p * r + p);
        b.push(qy);
        for xij in &x[i] {
            for a in support.values() {
                b.push(xij.mul_exact(a));
            }
        }
        b.extend(x[i].iter().cloned());

        let res = pslq_with_retries(&b, policy, &mut counters.pslq_iterations)
            .map_err(|e| Failure::new(stage1, format!("pslq: {}", e)))?;
        let rel = match res.outcome {
            PslqOutcome::Found(rel) => rel,
            PslqOutcome::NotFound { .. } => return Err(Failure::new(stage1, "no_relation_found")),
        };
        let b0 = &rel.coeffs[0];
        if b0.is_zero() {
            return Err(Failure::new(stage1, "relation_not_integer"));
        }

        let mut row_assign: Vec<Option<usize>> = vec![None; p];
        for j in 0..p {
            let mut hit: Option<usize> = None;
            for k in 0..r {
                let c = &rel.coeffs[1 + j * r + k];
                if c.is_zero() {
                    continue;
                }
                if hit.is_some() {
                    return Err(Failure::new(stage1, "ambiguous_assignment"));
                }
                let (q, rem) = (-c).div_rem(b0);
                if !rem.is_zero() || &q != q_hat {
                    return Err(Failure::new(stage1, "ambiguous_assignment"));
                }
                hit = Some(k);
            }
            // the plain X_ij coefficient must rescale to an integer (it
            // carries q_hat times the rational value of slot j)
            let c = &rel.coeffs[1 + p * r + j];
            if !(-c).div_rem(b0).1.is_zero() {
                return Err(Failure::new(stage1, "relation_not_integer"));
            }
            row_assign[j] = hit;
        }
        match &combined {
            None => combined = Some(row_assign),
            Some(prev) => {
                if prev != &row_assign {
                    return Err(Failure::new(stage1, "inconsistent_rows"));
                }
            }
        }
    }
    let assignments = combined.unwrap_or_else(|| vec![None; p]);

    let mut y_tilde = Vec::with_capacity(n);
    for (i, yi) in y.iter().enumerate() {
        let mut acc = yi.clone();
        for (j, a) in assignments.iter().enumerate() {
            if let Some(k) = a {
                acc = acc.sub_exact(&support.values()[*k].mul_exact(&x[i][j]));
            }
        }
        y_tilde.push(acc);
    }

    let free_cols: Vec<usize> = (0..p).filter(|&j| assignments[j].is_none()).collect();
    let mut beta: Vec<SupportValue> = assignments
        .iter()
        .map(|a| match a {
            Some(k) => SupportValue::Irrational(*k),
            None => SupportValue::zero(),
        })
        .collect();

    if free_cols.is_empty() {
        // nothing rational left: the residual must vanish
        if y_tilde.iter().any(|v| !v.abs_lt_pow2(-((policy.working_bits / 2) as i64))) {
            return Err(Failure::new(stage2, "y_not_rational"));
        }
    } else {
        let x_tilde: Vec<Vec<PrecReal>> =
            x.iter().map(|row| free_cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let zero_w = PrecReal::zero(policy.working_bits);
        let beta2 = lbr(&y_tilde, &x_tilde, n_bits, q_hat, r_hat, &zero_w, rng, counters)
            .map_err(|f| Failure::nested(stage2, f))?;
        for (slot, val) in free_cols.iter().zip(beta2) {
            beta[*slot] = SupportValue::Rational(val);
        }
    }

    let slack_exp = ceil_log2_usize(p) as i64 - n_bits as i64;
    let bound = pow2_rational(slack_exp);
    let resid = residual_inf_norm(
        &prec_vec_to_rational(y),
        &prec_rows_to_rational(x),
        &beta_as_rationals(&beta, Some(support)),
    );
    if resid > bound {
        return Err(Failure::new("mirrc", "verification"));
    }
    Ok(beta)
}
