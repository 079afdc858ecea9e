//! Parameter-threshold and information-theoretic bound calculators.
//!
//! Every threshold is evaluated with exact rational arithmetic; logarithms of
//! (possibly irrational) arguments are replaced by integer upper bounds
//! (`ceil log2` of a rational upper bound on the argument), so a reported
//! threshold is never an underestimate. All logarithms are base 2.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exp2, log2, PrecReal, Rational};
use crate::recovery::prec_to_rational;

/// Inputs for the threshold calculators.
#[derive(Clone, Debug)]
pub struct BoundsQuery {
    pub n: usize,
    pub p: usize,
    pub r: BigInt,
    pub q: BigInt,
    pub r_hat: BigInt,
    pub q_hat: BigInt,
    /// Noise level (dyadic, hence exact as a rational).
    pub sigma: PrecReal,
    pub epsilon: Rational,
    /// Density bound of the measurement distribution.
    pub c: Rational,
    /// Noise infinity-norm bound entering the ELO threshold.
    pub w_inf: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundsError {
    NonPositive(&'static str),
    Negative(&'static str),
}

impl std::fmt::Display for BoundsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundsError::NonPositive(what) => write!(f, "{} must be positive", what),
            BoundsError::Negative(what) => write!(f, "{} must be nonnegative", what),
        }
    }
}

impl std::error::Error for BoundsError {}

impl BoundsQuery {
    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.n == 0 {
            return Err(BoundsError::NonPositive("n"));
        }
        if self.p == 0 {
            return Err(BoundsError::NonPositive("p"));
        }
        for (v, name) in [(&self.r, "R"), (&self.q, "Q"), (&self.r_hat, "R_hat"), (&self.q_hat, "Q_hat")] {
            if !v.is_positive() {
                return Err(BoundsError::NonPositive(match name {
                    "R" => "R",
                    "Q" => "Q",
                    "R_hat" => "R_hat",
                    _ => "Q_hat",
                }));
            }
        }
        if self.sigma.is_negative() {
            return Err(BoundsError::Negative("sigma"));
        }
        if !self.epsilon.is_positive() {
            return Err(BoundsError::NonPositive("epsilon"));
        }
        if !self.c.is_positive() {
            return Err(BoundsError::NonPositive("c"));
        }
        if self.w_inf.is_negative() {
            return Err(BoundsError::Negative("w_inf"));
        }
        Ok(())
    }
}

/// Smallest integer `L` with `2^L >= x`, for rational `x > 0`.
pub fn ceil_log2_rational(x: &Rational) -> i64 {
    assert!(x.is_positive(), "log of a nonpositive value");
    let est = x.numer().bits() as i64 - x.denom().bits() as i64;
    // 2^(est-1) < x < 2^(est+1); probe a small window around the estimate
    for l in est - 1..=est + 2 {
        if pow2_rational(l) >= *x {
            return l;
        }
    }
    unreachable!("window always contains ceil(log2 x)")
}

/// Largest integer `L` with `2^L <= x`, for rational `x > 0`.
pub fn floor_log2_rational(x: &Rational) -> i64 {
    let c = ceil_log2_rational(x);
    if pow2_rational(c) == *x {
        c
    } else {
        c - 1
    }
}

pub fn pow2_rational(e: i64) -> Rational {
    if e >= 0 {
        Rational::new(BigInt::one() << e as usize, BigInt::one())
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn isqrt_ceil_big(v: &BigInt) -> BigInt {
    let r = v.sqrt();
    if &(&r * &r) == v {
        r
    } else {
        r + 1
    }
}

fn rat_int(v: i64) -> Rational {
    Rational::new(BigInt::from(v), BigInt::one())
}

fn rat_big(v: &BigInt) -> Rational {
    Rational::new(v.clone(), BigInt::one())
}

/// Truncation level for ELO (smallest integer satisfying the displayed
/// inequality):
/// `N >= (2n+p)/(2n) * [2n+p + 10 log(R_hat sqrt(p) + (W_inf + 1) sqrt(n))] + 6 log((1+c) n p)`.
pub fn n_threshold_elo(q: &BoundsQuery) -> Result<i64, BoundsError> {
    q.validate()?;
    let (n, p) = (q.n as i64, q.p as i64);
    let x_up = rat_big(&(&q.r_hat * isqrt_ceil_big(&BigInt::from(p))))
        + (q.w_inf.clone() + Rational::one()) * rat_big(&isqrt_ceil_big(&BigInt::from(n)));
    let l1 = ceil_log2_rational(&x_up);
    let l2 = ceil_log2_rational(&((Rational::one() + q.c.clone()) * rat_int(n * p)));
    let lead = rat_int(2 * n + p) * (rat_int(2 * n + p) + rat_int(10 * l1)) / rat_int(2 * n);
    let rhs = lead + rat_int(6 * l2);
    Ok(ceil_rational(&rhs))
}

fn ceil_rational(x: &Rational) -> i64 {
    let c = x.ceil();
    i64::try_from(c.numer()).expect("threshold fits i64")
}

/// Result of the self-referential LBR threshold search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LbrThreshold {
    Feasible(i64),
    /// No truncation level satisfies the inequality at this noise level.
    Infeasible,
}

/// Truncation level for LBR. `noisy = false` uses the adversarial-noise form
/// (`2^N sigma` inside the log), `noisy = true` the iid form
/// (`2^N sqrt(np) sigma`). `N` appears on both sides; the least solution is
/// found by exact scan from the noiseless closed form up to a cap.
pub fn n_threshold_lbr(q: &BoundsQuery, noisy: bool) -> Result<LbrThreshold, BoundsError> {
    q.validate()?;
    let (n, p) = (q.n as i64, q.p as i64);
    let lq = ceil_log2_rational(&rat_big(&q.q_hat));
    let lc = ceil_log2_rational(&(rat_int(3) * (Rational::one() + q.c.clone()) * rat_int(n * p)));
    let sigma = prec_to_rational(&q.sigma);
    let sigma_eff = if noisy {
        sigma * rat_big(&isqrt_ceil_big(&BigInt::from(n * p)))
    } else {
        sigma
    };
    let rp = rat_big(&(&q.r_hat * BigInt::from(p)));

    let rhs_at = |nn: i64| -> Rational {
        let log_arg = pow2_rational(nn) * sigma_eff.clone() + rp.clone();
        let lt = ceil_log2_rational(&log_arg);
        rat_int(2 * n + p)
            * (rat_int(2 * n + p) + rat_int(10 * lq) + rat_int(10 * lt) + rat_int(20 * lc))
            / rat_int(2)
    };
    // strict inequality N > rhs(N)
    let holds = |nn: i64| rat_int(nn) > rhs_at(nn);

    // noiseless baseline: rhs is constant in N
    let base = {
        let lt = ceil_log2_rational(&rp);
        let rhs = rat_int(2 * n + p)
            * (rat_int(2 * n + p) + rat_int(10 * lq) + rat_int(10 * lt) + rat_int(20 * lc))
            / rat_int(2);
        floor_rational(&rhs) + 1
    };
    if sigma_eff.is_zero() {
        return Ok(LbrThreshold::Feasible(base));
    }
    // Any feasible N is bounded: for N with 2^N sigma >= 1 the right side
    // grows by at least 5(2n+p) per unit of N while the left side grows by
    // one, so N < K + K/(5(2n+p)-1) with K = ceil(log2(1/sigma)). Together
    // with N >= base (the noiseless bound) this pins the scan range; an
    // empty range proves infeasibility.
    let k = ceil_log2_rational(&(Rational::one() / sigma_eff.clone()));
    let den = 5 * (2 * n + p) - 1;
    let cap = (2 * base + k.max(0) + 8).min(k + k.max(0) / den + 2);
    for nn in base..=cap {
        if holds(nn) {
            return Ok(LbrThreshold::Feasible(nn));
        }
    }
    Ok(LbrThreshold::Infeasible)
}

fn floor_rational(x: &Rational) -> i64 {
    let f = x.floor();
    i64::try_from(f.numer()).expect("threshold fits i64")
}

/// Truncation window from the noise-tolerance proposition: lower bound on N,
/// upper bound `floor(log2(1/sigma))` (none when sigma = 0), and whether the
/// large-`p` premise holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cor2Window {
    pub lower: i64,
    pub upper: Option<i64>,
    pub premise_ok: bool,
    pub window_nonempty: bool,
}

pub fn n_window_cor2(q: &BoundsQuery) -> Result<Cor2Window, BoundsError> {
    q.validate()?;
    let (n, p) = (q.n as i64, q.p as i64);
    let rq = &q.r * &q.q;
    let log_rq = if rq.is_one() { 0 } else { ceil_log2_rational(&rat_big(&rq)) };
    let inner = rat_int((p + 2 * n) * (p + 2 * n)) / rat_int(2 * n)
        + (rat_int(2) + rat_int(p) / rat_int(n)) * rat_int(log_rq);
    let lower = ceil_rational(&((Rational::one() + q.epsilon.clone()) * inner));

    let sigma = prec_to_rational(&q.sigma);
    let upper = if sigma.is_zero() {
        None
    } else {
        Some(floor_log2_rational(&(Rational::one() / sigma)))
    };

    // premise: p >= (300/eps) log2(300 / ((1+c) eps)), checked at 192 bits
    let prec = 192u32;
    let arg = rat_int(300) / ((Rational::one() + q.c.clone()) * q.epsilon.clone());
    let premise_ok = if arg <= Rational::one() {
        true // log term nonpositive: any positive p qualifies
    } else {
        let log_term = log2(&rational_to_prec(&arg, prec), prec);
        let bound = rational_to_prec(&(rat_int(300) / q.epsilon.clone()), prec).mul(&log_term);
        !PrecReal::from_i64(p, prec).lt(&bound)
    };

    let window_nonempty = upper.map_or(true, |u| u >= lower);
    Ok(Cor2Window { lower, upper, premise_ok, window_nonempty })
}

pub fn rational_to_prec(x: &Rational, prec: u32) -> PrecReal {
    let num = PrecReal::from_bigint(x.numer(), prec.max(x.numer().bits() as u32 + 1));
    let den = PrecReal::from_bigint(x.denom(), prec.max(x.denom().bits() as u32 + 1));
    num.div_prec(&den, prec)
}

/// Information-theoretic noise ceiling:
/// `R (np)^3 (2^(2p log(2QR+1)/n) - 1)^(-1/2)` at `prec` bits.
pub fn sigma_info_bound(n: usize, p: usize, q: &BigInt, r: &BigInt, prec: u32) -> PrecReal {
    let work = prec + 64;
    let base = BigInt::from(2) * q * r + 1;
    let exponent = PrecReal::from_u64(2 * p as u64, work)
        .mul(&log2(&PrecReal::from_bigint(&base, work), work))
        .div_prec(&PrecReal::from_u64(n as u64, work), work);
    let pow = exp2(&exponent, work);
    let denom = pow.sub(&PrecReal::one(work)).sqrt(work).expect("2QR+1 >= 3");
    let np3 = BigInt::from((n * p) as u64).pow(3);
    PrecReal::from_bigint(&(r * np3), work).div_prec(&denom, prec)
}

/// Optimal noise scale `sigma_0 = 2^(-p log(RQ) / n)` at `prec` bits.
pub fn sigma0_optimal(p: usize, n: usize, r: &BigInt, q: &BigInt, prec: u32) -> PrecReal {
    let work = prec + 64;
    let rq = r * q;
    if rq.is_one() {
        return PrecReal::one(prec);
    }
    let t = PrecReal::from_u64(p as u64, work)
        .mul(&log2(&PrecReal::from_bigint(&rq, work), work))
        .div_prec(&PrecReal::from_u64(n as u64, work), work);
    exp2(&t.neg(), prec)
}

/// Truncation level for MIRR: smallest integer with
/// `N >= (2n+p)/(2n) [2n+p + 10 log(Q_hat R_hat sqrt p + sqrt n)] + 6 log((1+c)np)`.
pub fn n_threshold_mirr(q: &BoundsQuery) -> Result<i64, BoundsError> {
    q.validate()?;
    let (n, p) = (q.n as i64, q.p as i64);
    let x_up = rat_big(&(&q.q_hat * &q.r_hat * isqrt_ceil_big(&BigInt::from(p))))
        + rat_big(&isqrt_ceil_big(&BigInt::from(n)));
    let l1 = ceil_log2_rational(&x_up);
    let l2 = ceil_log2_rational(&((Rational::one() + q.c.clone()) * rat_int(n * p)));
    let lead = rat_int(2 * n + p) * (rat_int(2 * n + p) + rat_int(10 * l1)) / rat_int(2 * n);
    Ok(ceil_rational(&(lead + rat_int(6 * l2))))
}

/// Drift term of the JIRSS guarantee:
/// `n + p + n log(n^2 p) + (n+p)/2 log p + (n+p)^2/2 - n log c - n N`;
/// negative values indicate the whp regime.
pub fn jirss_condition_value(n: usize, p: usize, n_bits: u32, c: &Rational, prec: u32) -> PrecReal {
    let work = prec + 32;
    let (nf, pf) = (n as u64, p as u64);
    let log_n2p = log2(&PrecReal::from_u64(nf * nf * pf, work), work);
    let log_p = log2(&PrecReal::from_u64(pf, work), work);
    let log_c = log2(&rational_to_prec(c, work), work);
    let np = PrecReal::from_u64(nf + pf, work);
    let mut acc = PrecReal::from_u64(nf + pf, work);
    acc = acc.add(&PrecReal::from_u64(nf, work).mul(&log_n2p));
    acc = acc.add(&np.mul(&log_p).scale2(-1));
    acc = acc.add(&np.mul(&np).scale2(-1));
    acc = acc.sub(&PrecReal::from_u64(nf, work).mul(&log_c));
    acc = acc.sub(&PrecReal::from_u64(nf, work).mul(&PrecReal::from_u64(n_bits as u64, work)));
    acc.with_prec(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_query() -> BoundsQuery {
        BoundsQuery {
            n: 1,
            p: 15,
            r: BigInt::one(),
            q: BigInt::one(),
            r_hat: BigInt::one(),
            q_hat: BigInt::one(),
            sigma: PrecReal::zero(64),
            epsilon: Rational::new(BigInt::one(), BigInt::from(10)),
            c: Rational::one(),
            w_inf: Rational::zero(),
        }
    }

    #[test]
    fn ceil_log2_small_values() {
        let r = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(ceil_log2_rational(&r(1, 1)), 0);
        assert_eq!(ceil_log2_rational(&r(5, 1)), 3);
        assert_eq!(ceil_log2_rational(&r(8, 1)), 3);
        assert_eq!(ceil_log2_rational(&r(9, 1)), 4);
        assert_eq!(ceil_log2_rational(&r(1, 3)), -1);
        assert_eq!(floor_log2_rational(&r(1, 3)), -2);
        assert_eq!(floor_log2_rational(&r(8, 1)), 3);
    }

    #[test]
    fn elo_threshold_monotone_in_r_hat() {
        let q1 = base_query();
        let mut q2 = base_query();
        q2.r_hat = BigInt::from(100);
        assert!(n_threshold_elo(&q2).unwrap() >= n_threshold_elo(&q1).unwrap());
    }

    #[test]
    fn elo_threshold_dominated_by_leading_term() {
        // n = p: the value is always at least 2n + p
        let mut q = base_query();
        q.n = 4;
        q.p = 4;
        assert!(n_threshold_elo(&q).unwrap() >= 12);
    }

    #[test]
    fn lbr_reduces_to_closed_form_at_zero_noise() {
        let mut q = base_query();
        q.p = 10;
        q.q_hat = BigInt::from(2);
        q.r_hat = BigInt::from(2);
        match n_threshold_lbr(&q, true).unwrap() {
            LbrThreshold::Feasible(n) => assert!(n > 0),
            LbrThreshold::Infeasible => panic!("zero noise must be feasible"),
        }
    }

    #[test]
    fn lbr_infeasible_for_huge_noise() {
        let mut q = base_query();
        q.sigma = PrecReal::from_u64(1 << 20, 64);
        assert_eq!(n_threshold_lbr(&q, false).unwrap(), LbrThreshold::Infeasible);
    }

    #[test]
    fn cor2_documented_point() {
        // (eps=0.1, p=20, n=1, R=Q=1) -> lower = ceil(1.1 * 484/2) = 267
        let mut q = base_query();
        q.p = 20;
        let w = n_window_cor2(&q).unwrap();
        assert_eq!(w.lower, 267);
        assert!(!w.premise_ok);
        assert_eq!(w.upper, None);

        q.sigma = PrecReal::one(64);
        let w = n_window_cor2(&q).unwrap();
        assert_eq!(w.upper, Some(0));
        assert!(!w.window_nonempty);
    }

    #[test]
    fn sigma_info_spot_value() {
        // (n=2, p=4, Q=1, R=1): 512 / sqrt(3^4 - 1) = 57.243...
        let v = sigma_info_bound(2, 4, &BigInt::one(), &BigInt::one(), 96);
        let f = v.to_f64();
        assert!((f - 512.0 / 80f64.sqrt()).abs() < 1e-9, "got {}", f);
    }

    #[test]
    fn sigma0_exact_cases() {
        // RQ = 2, p = n -> 1/2
        let v = sigma0_optimal(3, 3, &BigInt::from(2), &BigInt::one(), 96);
        assert_eq!(v, PrecReal::from_f64(0.5, 96).unwrap());
        // RQ = 1 -> 1
        let v = sigma0_optimal(7, 2, &BigInt::one(), &BigInt::one(), 96);
        assert_eq!(v, PrecReal::one(96));
        // RQ = 2^30, p = 100, n = 5 -> 2^-600
        let v = sigma0_optimal(100, 5, &BigInt::from(1u64 << 30), &BigInt::one(), 96);
        assert_eq!(v, PrecReal::exact_dyadic(BigInt::one(), -600));
    }

    #[test]
    fn jirss_condition_signs() {
        let c = Rational::one();
        // N = 0: positive for p >= 2
        assert!(!jirss_condition_value(1, 12, 0, &c, 96).is_negative());
        // generous N: negative
        assert!(jirss_condition_value(1, 12, 150, &c, 96).is_negative());
    }
}
