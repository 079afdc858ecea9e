//! Phase retrieval from a single magnitude measurement `Y = |<X, beta*>|`,
//! for discrete (positive integer) and continuous measurement vectors.
//!
//! Both solvers work on `Y^2`, which is an integer combination of products
//! derived from the complex support; the derived set must pass the rational
//! independence screen before any decoding is trusted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::arith::{PrecComplex, PrecReal};
use crate::counters::Counters;
use crate::recovery::{Failure, SupportValue};
use crate::relation::{
    pslq_with_retries, screen_rational_independence, PrecisionPolicy, PslqOutcome, RelationError,
    ScreenOutcome,
};
use crate::subsetsum::{pair_order, solve_dependent_products};

/// Complex support values together with the derived real set
/// `S' = {|a_d|^2} ∪ {a_i^H a_j + a_i a_j^H}` the solvers actually relate
/// against.
#[derive(Clone, Debug)]
pub struct ComplexSupport {
    values: Vec<PrecComplex>,
    sprime: Vec<PrecReal>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub enum PhaseSupportError {
    Empty,
    ZeroValue,
    DuplicateValue,
    ZeroDerived,
    Dependent { relation: Vec<BigInt> },
    Relation(RelationError),
}

impl fmt::Display for PhaseSupportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSupportError::Empty => write!(f, "empty support"),
            PhaseSupportError::ZeroValue => write!(f, "support contains zero"),
            PhaseSupportError::DuplicateValue => write!(f, "support values must be pairwise distinct"),
            PhaseSupportError::ZeroDerived => {
                write!(f, "derived set contains zero (support rejected)")
            }
            PhaseSupportError::Dependent { relation } => {
                write!(f, "derived set failed the independence screen: relation {:?}", relation)
            }
            PhaseSupportError::Relation(e) => write!(f, "screen error: {}", e),
        }
    }
}

impl std::error::Error for PhaseSupportError {}

/// `{|a_d|^2 : d} ∪ {a_i^H a_j + a_i a_j^H : i < j}` in fixed order
/// (diagonal terms first, then lexicographic pairs). Errors when any derived
/// entry is zero: a set containing 0 is dependent.
pub fn build_sprime(values: &[PrecComplex]) -> Result<Vec<PrecReal>, PhaseSupportError> {
    if values.is_empty() {
        return Err(PhaseSupportError::Empty);
    }
    let mut out = Vec::with_capacity(values.len() * (values.len() + 1) / 2);
    for a in values {
        out.push(a.abs_sq());
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            out.push(PrecComplex::herm_cross(&values[i], &values[j]));
        }
    }
    if out.iter().any(|v| v.is_zero()) {
        return Err(PhaseSupportError::ZeroDerived);
    }
    Ok(out)
}

impl ComplexSupport {
    /// Builds and screens the derived set before accepting the support.
    pub fn screened(values: Vec<PrecComplex>, policy: &PrecisionPolicy) -> Result<Self, PhaseSupportError> {
        if values.iter().any(|v| v.is_zero()) {
            return Err(PhaseSupportError::ZeroValue);
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if values[i] == values[j] {
                    return Err(PhaseSupportError::DuplicateValue);
                }
            }
        }
        let sprime = build_sprime(&values)?;
        if sprime.len() >= 2 {
            match screen_rational_independence(&sprime, policy).map_err(PhaseSupportError::Relation)? {
                ScreenOutcome::IndependentUpToBound { .. } => {}
                ScreenOutcome::DependentWithRelation(rel) => {
                    return Err(PhaseSupportError::Dependent { relation: rel.coeffs });
                }
            }
        }
        let pairs = pair_order(values.len());
        Ok(ComplexSupport { values, sprime, pairs })
    }

    /// Default support `{sqrt2, 1 + sqrt3}`: its derived set
    /// `{2, 4 + 2 sqrt3, 2 sqrt2 + 2 sqrt6}` is rationally independent because
    /// `{1, sqrt2, sqrt3, sqrt6}` is.
    pub fn default_support(prec: u32, policy: &PrecisionPolicy) -> Result<Self, PhaseSupportError> {
        let r2 = PrecReal::from_u64(2, prec.max(64)).sqrt(prec).expect("positive");
        let r3 = PrecReal::from_u64(3, prec.max(64)).sqrt(prec).expect("positive");
        let one = PrecReal::one(prec);
        let values = vec![PrecComplex::real(r2), PrecComplex::real(one.add_exact(&r3))];
        Self::screened(values, policy)
    }

    pub fn values(&self) -> &[PrecComplex] {
        &self.values
    }

    pub fn sprime(&self) -> &[PrecReal] {
        &self.sprime
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the cross term (i, j), i < j, inside [`Self::sprime`].
    pub fn cross_index(&self, i: usize, j: usize) -> usize {
        let r = self.values.len();
        let pos = self.pairs.iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).expect("valid pair");
        r + pos
    }

    pub fn support_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Decoded coefficients of the `Y^2` relation.
struct ThetaVector {
    diag: Vec<BigInt>,
    cross: Vec<BigInt>, // indexed like support_pairs()
}

fn decode_theta(
    ysq: &PrecReal,
    support: &ComplexSupport,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
    stage: &str,
) -> Result<ThetaVector, Failure> {
    let r = support.len();
    let mut b = Vec::with_capacity(1 + support.sprime().len());
    b.push(ysq.clone());
    b.extend(support.sprime().iter().cloned());
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
    let decode = |idx: usize| -> Result<BigInt, Failure> {
        let (q, rem) = (-&rel.coeffs[idx]).div_rem(b0);
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Failure::new(stage, "relation_not_integer"))
        }
    };
    let diag = (0..r).map(|d| decode(1 + d)).collect::<Result<_, _>>()?;
    let cross = (0..support.support_pairs().len())
        .map(|t| decode(1 + r + t))
        .collect::<Result<_, _>>()?;
    Ok(ThetaVector { diag, cross })
}

/// The theta vector a candidate assignment would produce, exactly. Products
/// of equal-valued entries fold into the diagonal, so the coefficient on
/// `|a_d|^2` is the square of the subset sum `(sum_{i: beta_i = a_d} X_i)^2`.
fn theta_of_assignment(assign: &[usize], x: &[BigInt], support: &ComplexSupport) -> ThetaVector {
    let r = support.len();
    let mut sums = vec![BigInt::zero(); r];
    for (xi, &a) in x.iter().zip(assign) {
        sums[a] += xi;
    }
    let diag = sums.iter().map(|s| s * s).collect();
    let mut cross = vec![BigInt::zero(); support.support_pairs().len()];
    for (t, &(k, l)) in support.support_pairs().iter().enumerate() {
        let mut acc = BigInt::zero();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let (a, b) = (assign[i].min(assign[j]), assign[i].max(assign[j]));
                if (a, b) == (k, l) {
                    acc += &x[i] * &x[j];
                }
            }
        }
        cross[t] = acc;
    }
    ThetaVector { diag, cross }
}

fn theta_matches(a: &ThetaVector, b: &ThetaVector) -> bool {
    a.diag == b.diag && a.cross == b.cross
}

/// Recover the binary pair-indicator for one support pair; the `p = 2` case
/// has a single unknown and is decided directly.
fn solve_pair_indicator(
    theta: &BigInt,
    x: &[BigInt],
    counters: &mut Counters,
    stage: &str,
) -> Result<Vec<u8>, Failure> {
    if x.len() == 2 {
        let prod = &x[0] * &x[1];
        if theta.is_zero() {
            return Ok(vec![0]);
        }
        if theta == &prod {
            return Ok(vec![1]);
        }
        return Err(Failure::new(stage, "verification_mismatch"));
    }
    solve_dependent_products(theta, x, counters)
        .map_err(|e| Failure::new(stage, format!("dependent_subset_sum: {}", e)))
}

/// Phase retrieval for positive integer measurements: one relation on
/// `(Y^2, S')`, one dependent-product subset-sum per active support pair,
/// then the case analysis on the number of active support values.
pub fn phase_discrete(
    y: &PrecReal,
    x: &[BigInt],
    support: &ComplexSupport,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage = "phase_d";
    let p = x.len();
    if p == 0 {
        return Err(Failure::new(stage, "empty measurement vector"));
    }
    if x.iter().any(|v| !v.is_positive()) {
        return Err(Failure::new(stage, "measurements must be positive integers"));
    }
    if y.is_negative() {
        return Err(Failure::new(stage, "magnitude measurement must be nonnegative"));
    }
    if y.is_zero() {
        // support values are nonzero and X is positive: no valid assignment
        return Err(Failure::new(stage, "no_valid_assignment"));
    }
    let ysq = y.mul_exact(y);
    let theta = decode_theta(&ysq, support, policy, counters, stage)?;

    let active: Vec<usize> = (0..support.len()).filter(|&d| !theta.diag[d].is_zero()).collect();
    let assign: Vec<usize> = match active.len() {
        0 => return Err(Failure::new(stage, "no_active_support")),
        1 => vec![active[0]; p],
        2 => {
            let (k, l) = (active[0], active[1]);
            let t_kl = &theta.cross[support.cross_index(k, l) - support.len()];
            let xi = solve_pair_indicator(t_kl, x, counters, stage)?;
            let pairs = pair_order(p);
            // two-coloring along edges incident to index 0
            let mut color = vec![false; p];
            for (t, &(i, j)) in pairs.iter().enumerate() {
                if i == 0 {
                    color[j] = xi[t] == 1;
                }
            }
            let cand_a: Vec<usize> = color.iter().map(|&c| if c { l } else { k }).collect();
            let cand_b: Vec<usize> = color.iter().map(|&c| if c { k } else { l }).collect();
            let ok_a = theta_matches(&theta_of_assignment(&cand_a, x, support), &theta);
            let ok_b = theta_matches(&theta_of_assignment(&cand_b, x, support), &theta);
            match (ok_a, ok_b) {
                (true, false) => cand_a,
                (false, true) => cand_b,
                (true, true) => cand_a, // symmetric instance; deterministic pick
                (false, false) => return Err(Failure::new(stage, "verification")),
            }
        }
        _ => {
            // >= 3 active values: solve every active pair, then intersect the
            // incident pair labels per index
            let pairs = pair_order(p);
            let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p];
            for (t, &(k, l)) in support.support_pairs().iter().enumerate() {
                let coeff = &theta.cross[t];
                if coeff.is_zero() {
                    continue;
                }
                let xi = solve_pair_indicator(coeff, x, counters, stage)?;
                for (u, &(i, j)) in pairs.iter().enumerate() {
                    if xi[u] == 1 {
                        incident[i].push((k, l));
                        incident[j].push((k, l));
                    }
                }
            }
            let mut assign = Vec::with_capacity(p);
            for cand_pairs in &incident {
                if cand_pairs.is_empty() {
                    return Err(Failure::new(stage, "undecodable_index"));
                }
                let mut cand: Vec<usize> = vec![cand_pairs[0].0, cand_pairs[0].1];
                for &(k, l) in &cand_pairs[1..] {
                    cand.retain(|&c| c == k || c == l);
                }
                match cand.len() {
                    0 => return Err(Failure::new(stage, "undecodable_index")),
                    // ties broken deterministically: lowest support index
                    _ => assign.push(cand.into_iter().min().expect("nonempty")),
                }
            }
            assign
        }
    };

    if !theta_matches(&theta_of_assignment(&assign, x, support), &theta) {
        return Err(Failure::new(stage, "verification"));
    }
    Ok(assign.into_iter().map(SupportValue::Irrational).collect())
}

/// The relation set for continuous phase retrieval:
/// `S1 = {X_i^2 |a_k|^2}`, `S2 = {X_i X_j |a_k|^2}`,
/// `S3 = {X_i X_j (a_k^H a_l + a_k a_l^H)}` in fixed order.
/// Errors on a zero entry (probability-0 at precision; instance rejected).
pub fn build_l_phase(x: &[PrecReal], support: &ComplexSupport) -> Result<Vec<PrecReal>, Failure> {
    let stage = "phase_c";
    let p = x.len();
    let r = support.len();
    let mut out = Vec::with_capacity(p * r + p * (p - 1) / 2 * (r + r * (r - 1) / 2));
    for xi in x {
        let xi2 = xi.mul_exact(xi);
        for k in 0..r {
            out.push(xi2.mul_exact(&support.sprime()[k]));
        }
    }
    let pairs = pair_order(p);
    for &(i, j) in &pairs {
        let prod = x[i].mul_exact(&x[j]);
        for k in 0..r {
            out.push(prod.mul_exact(&support.sprime()[k]));
        }
    }
    for &(i, j) in &pairs {
        let prod = x[i].mul_exact(&x[j]);
        for t in 0..support.support_pairs().len() {
            out.push(prod.mul_exact(&support.sprime()[r + t]));
        }
    }
    if out.iter().any(|v| v.is_zero()) {
        return Err(Failure::new(stage, "zero_entry_in_relation_set"));
    }
    Ok(out)
}

/// Phase retrieval for a jointly continuous measurement vector: a single
/// relation on `(Y^2, L)` decodes the support assignment from the `S1` block.
pub fn phase_continuous(
    y: &PrecReal,
    x: &[PrecReal],
    support: &ComplexSupport,
    policy: &PrecisionPolicy,
    counters: &mut Counters,
) -> Result<Vec<SupportValue>, Failure> {
    let stage = "phase_c";
    let p = x.len();
    let r = support.len();
    if p == 0 {
        return Err(Failure::new(stage, "empty measurement vector"));
    }
    if y.is_negative() {
        return Err(Failure::new(stage, "magnitude measurement must be nonnegative"));
    }
    if y.is_zero() {
        return Err(Failure::new(stage, "no_valid_assignment"));
    }
    let l = build_l_phase(x, support)?;
    let ysq = y.mul_exact(y);
    let mut b = Vec::with_capacity(1 + l.len());
    b.push(ysq);
    b.extend(l);
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
    let decode = |idx: usize| -> Result<BigInt, Failure> {
        let (q, rem) = (-&rel.coeffs[idx]).div_rem(b0);
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(Failure::new(stage, "relation_not_integer"))
        }
    };

    // assignment from the S1 block
    let mut assign = Vec::with_capacity(p);
    for i in 0..p {
        let mut hit = None;
        for k in 0..r {
            let c = decode(1 + i * r + k)?;
            if c.is_zero() {
                continue;
            }
            if hit.is_some() || !c.is_one() {
                return Err(Failure::new(stage, "ambiguous_assignment"));
            }
            hit = Some(k);
        }
        match hit {
            Some(k) => assign.push(k),
            None => return Err(Failure::new(stage, "ambiguous_assignment")),
        }
    }

    // exact re-verification of the whole coefficient vector
    let pairs = pair_order(p);
    let mut idx = 1 + p * r;
    for &(i, j) in &pairs {
        for k in 0..r {
            let expect = if assign[i] == k && assign[j] == k { 2 } else { 0 };
            if decode(idx)? != BigInt::from(expect) {
                return Err(Failure::new(stage, "verification"));
            }
            idx += 1;
        }
    }
    for &(i, j) in &pairs {
        for &(k, l) in support.support_pairs() {
            let hit = (assign[i].min(assign[j]), assign[i].max(assign[j])) == (k, l);
            if decode(idx)? != BigInt::from(hit as u8) {
                return Err(Failure::new(stage, "verification"));
            }
            idx += 1;
        }
    }
    Ok(assign.into_iter().map(SupportValue::Irrational).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_policy() -> PrecisionPolicy {
        PrecisionPolicy::for_relation_with_data(4, 24, 320)
    }

    #[test]
    fn sprime_of_default_support() {
        let pol = test_policy();
        let s = ComplexSupport::default_support(320, &pol).unwrap();
        let sp = s.sprime();
        assert_eq!(sp.len(), 3);
        // |sqrt2|^2 = 2, |1+sqrt3|^2 = 4 + 2 sqrt3, cross = 2 sqrt2 + 2 sqrt6
        let two = PrecReal::from_u64(2, 64);
        assert!(sp[0].sub_exact(&two).abs_lt_pow2(-300));
        let r3 = PrecReal::from_u64(3, 400).sqrt(330).unwrap();
        let want1 = PrecReal::from_u64(4, 64).add_exact(&r3.scale2(1));
        assert!(sp[1].sub_exact(&want1).abs_lt_pow2(-300));
        let r2 = PrecReal::from_u64(2, 400).sqrt(330).unwrap();
        let r6 = PrecReal::from_u64(6, 400).sqrt(330).unwrap();
        let want2 = r2.scale2(1).add_exact(&r6.scale2(1));
        assert!(sp[2].sub_exact(&want2).abs_lt_pow2(-300));
    }

    #[test]
    fn sprime_single_value() {
        let one = PrecComplex::real(PrecReal::one(64));
        let sp = build_sprime(&[one]).unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0], PrecReal::one(64));
    }

    #[test]
    fn dependent_support_rejected() {
        // {2 - sqrt2, sqrt2}: cross term 2(2-sqrt2)sqrt2 = 4 sqrt2 - 4 is
        // dependent with {|2-sqrt2|^2, |sqrt2|^2}
        let w = 384;
        let pol = PrecisionPolicy::for_relation(3, 24);
        let r2 = PrecReal::from_u64(2, w).sqrt(w).unwrap();
        let a = PrecComplex::real(PrecReal::from_u64(2, w).sub_exact(&r2));
        let b = PrecComplex::real(r2);
        match ComplexSupport::screened(vec![a, b], &pol) {
            Err(PhaseSupportError::Dependent { .. }) => {}
            other => panic!("expected dependence, got {:?}", other),
        }
    }

    #[test]
    fn l_phase_sizes() {
        let pol = test_policy();
        let s = ComplexSupport::default_support(320, &pol).unwrap();
        let x: Vec<PrecReal> =
            (1..=2).map(|k| PrecReal::from_u64(k, 320).sqrt(300).unwrap()).collect();
        // p=2, R=2: 4 + 2 + 1 = 7 entries
        assert_eq!(build_l_phase(&x, &s).unwrap().len(), 7);

        let one_val = ComplexSupport::screened(
            vec![PrecComplex::real(PrecReal::from_u64(7, 320).sqrt(300).unwrap())],
            &pol,
        )
        .unwrap();
        // p=2, R=1: S3 empty
        assert_eq!(build_l_phase(&x, &one_val).unwrap().len(), 3);
        let x1 = vec![x[0].clone()];
        assert_eq!(build_l_phase(&x1, &one_val).unwrap().len(), 1);
    }

    #[test]
    fn constant_assignment_decodes_without_pair_solves() {
        let pol = PrecisionPolicy::for_relation_with_data(4, 60, 700);
        let s = ComplexSupport::default_support(pol.working_bits, &pol).unwrap();
        let x: Vec<BigInt> = vec![BigInt::from(12345), BigInt::from(67890), BigInt::from(13579)];
        // all entries a_1: Y^2 = (sum X_i)^2 * |a_1|^2... computed directly
        let sum: BigInt = x.iter().sum();
        let lin = s.values()[0].re.mul_bigint_exact(&sum);
        let y = lin.abs();
        let mut c = Counters::new();
        let got = phase_discrete(&y, &x, &s, &pol, &mut c).unwrap();
        assert!(got.iter().all(|v| v == &SupportValue::Irrational(0)));
        assert_eq!(c.lll_invocations, 0);
    }

    #[test]
    fn two_value_p2_forced_coloring() {
        let pol = PrecisionPolicy::for_relation_with_data(4, 40, 700);
        let s = ComplexSupport::default_support(pol.working_bits, &pol).unwrap();
        let x: Vec<BigInt> = vec![BigInt::from(1048573), BigInt::from(524287)];
        // beta = (a1, a2), both real here: Y = x1 a1 + x2 a2
        let lin = s.values()[0]
            .re
            .mul_bigint_exact(&x[0])
            .add_exact(&s.values()[1].re.mul_bigint_exact(&x[1]));
        let y = lin.abs();
        let mut c = Counters::new();
        let got = phase_discrete(&y, &x, &s, &pol, &mut c).unwrap();
        assert_eq!(got, vec![SupportValue::Irrational(0), SupportValue::Irrational(1)]);
    }

    #[test]
    fn phase_invariance_of_y_squared() {
        // |<X, e^{i t} beta>|^2 == |<X, beta>|^2 for any rotation
        let w = 256;
        let x: Vec<PrecReal> = (2..6u64).map(|k| PrecReal::from_u64(k, w).sqrt(w).unwrap()).collect();
        let beta: Vec<PrecComplex> = (2..6u64)
            .map(|k| {
                PrecComplex::new(
                    PrecReal::from_u64(k, w).sqrt(w).unwrap(),
                    PrecReal::from_u64(k + 7, w).sqrt(w).unwrap(),
                )
            })
            .collect();
        let inner = |b: &[PrecComplex]| {
            let mut acc = PrecComplex::real(PrecReal::zero(w));
            for (xi, bi) in x.iter().zip(b) {
                acc = acc.add_exact(&bi.mul_real_exact(xi));
            }
            acc.abs_sq()
        };
        let base = inner(&beta);
        for k in 0..20u64 {
            // rotation by a unit complex (c, s) with c^2 + s^2 ~ 1 at precision
            let t = PrecReal::from_u64(k + 1, w).div_prec(&PrecReal::from_u64(40, w), w);
            let c = PrecReal::one(w).sub(&t.mul(&t)).sqrt(w).unwrap();
            let rot = PrecComplex::new(c, t);
            let rotated: Vec<PrecComplex> = beta.iter().map(|b| b.mul_exact(&rot)).collect();
            let r = inner(&rotated);
            let diff = r.sub_exact(&base).abs();
            // |rot|^2 differs from 1 only by representation rounding
            assert!(diff.div_prec(&base, w).abs_lt_pow2(-(w as i64) + 8));
        }
    }
}
