//! Planted-instance generators and the solve dispatcher.
//!
//! All randomness in an instance derives from `(seed, stream tag)`, so
//! identical parameters and seed give byte-identical serialized instances.
//! Planted identities are verified exactly at construction; a corrupted
//! instance cannot be produced.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{PrecComplex, PrecReal, Rational};
use crate::counters::Counters;
use crate::phase::{phase_continuous, phase_discrete, ComplexSupport};
use crate::recovery::io::{
    instance_from_json, instance_to_json, InstanceParams, MatrixData,
    RegressionInstance, VectorData,
};
use crate::recovery::{
    elo, ihdr, jirss, lbr, mirr, mirr_c, mixed_ira_only, prec_to_rational, RecoveryReport,
    SupportSet, SupportValue,
};
use crate::relation::PrecisionPolicy;
use crate::rng::{stream_rng, uniform_bigint_range, uniform_pow2, uniform_unit};
use crate::subsetsum::{pair_products, solve_dependent_products, solve_single};

/// Everything the generators and the CLI can produce and solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Elo,
    Lbr,
    Jirss,
    Ihdr,
    Mirr,
    Mirrc,
    PhaseD,
    PhaseC,
    SubsetSum,
    DepSubsetSum,
}

impl InstanceKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "elo" => InstanceKind::Elo,
            "lbr" => InstanceKind::Lbr,
            "jirss" => InstanceKind::Jirss,
            "ihdr" => InstanceKind::Ihdr,
            "mirr" => InstanceKind::Mirr,
            "mirrc" => InstanceKind::Mirrc,
            "phase_d" => InstanceKind::PhaseD,
            "phase_c" => InstanceKind::PhaseC,
            "subsetsum" => InstanceKind::SubsetSum,
            "dep_subsetsum" => InstanceKind::DepSubsetSum,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::Elo => "elo",
            InstanceKind::Lbr => "lbr",
            InstanceKind::Jirss => "jirss",
            InstanceKind::Ihdr => "ihdr",
            InstanceKind::Mirr => "mirr",
            InstanceKind::Mirrc => "mirrc",
            InstanceKind::PhaseD => "phase_d",
            InstanceKind::PhaseC => "phase_c",
            InstanceKind::SubsetSum => "subsetsum",
            InstanceKind::DepSubsetSum => "dep_subsetsum",
        }
    }
}

/// Measurement-entry distributions the generators draw from.
///
/// `DiscreteUniform` over `{1, ..., 2^bits}` assigns each integer at most
/// `1/2^bits` probability and has mean below `2^bits` — the point-mass and
/// expectation conditions behind the discrete recovery guarantees, with both
/// constants equal to one.
#[derive(Clone, Debug, PartialEq)]
pub enum DistributionSpec {
    DiscreteUniform { bits: u32 },
    ContinuousUniform { lo: f64, hi: f64, precision: u32 },
    Gaussian { mean: f64, sd: f64, precision: u32 },
}

impl DistributionSpec {
    /// Integer draw; only meaningful for the discrete variant.
    pub fn sample_int(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Option<BigInt> {
        match self {
            DistributionSpec::DiscreteUniform { bits } => Some(uniform_pow2(rng, *bits)),
            _ => None,
        }
    }

    /// Real draw at the spec's precision.
    pub fn sample_real(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Option<PrecReal> {
        match self {
            DistributionSpec::DiscreteUniform { .. } => None,
            DistributionSpec::ContinuousUniform { lo, hi, precision } => {
                let u = uniform_unit(rng, *precision);
                let lo = PrecReal::from_f64(*lo, *precision)?;
                let hi = PrecReal::from_f64(*hi, *precision)?;
                Some(lo.add_exact(&hi.sub_exact(&lo).mul_exact(&u)).with_prec(*precision))
            }
            DistributionSpec::Gaussian { mean, sd, precision } => {
                // Box-Muller over f64, lifted to a dyadic; the tail beyond 53
                // bits is not meaningful for a Gaussian draw
                use rand::Rng;
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                PrecReal::from_f64(mean + sd * z, *precision)
            }
        }
    }
}

/// Generator knobs; which ones matter depends on the kind.
#[derive(Clone, Debug)]
pub struct GenParams {
    pub n: usize,
    pub p: usize,
    /// Entry bit-length of discrete X, or truncation level for continuous X.
    pub n_bits: Option<u32>,
    /// Precision of continuous X entries.
    pub precision: Option<u32>,
    /// True common denominator Q of the rational slots.
    pub q: Option<u64>,
    /// Magnitude bound on rational values (R tilde); `r = 1` with q = 1
    /// plants binary vectors for ELO.
    pub r: Option<u64>,
    /// Size of the irrational support.
    pub support_size: Option<usize>,
    /// Number of rational slots for the mixed kinds.
    pub rational_count: Option<usize>,
    /// Noise level sigma = 2^k; `None` means noiseless.
    pub sigma_log2: Option<i64>,
}

impl GenParams {
    pub fn new(n: usize, p: usize) -> Self {
        GenParams {
            n,
            p,
            n_bits: None,
            precision: None,
            q: None,
            r: None,
            support_size: None,
            rational_count: None,
            sigma_log2: None,
        }
    }
}

/// Discrete or continuous phase measurement vector.
#[derive(Clone, Debug)]
pub enum PhaseX {
    Int(Vec<BigInt>),
    Real(Vec<PrecReal>),
}

/// One phase-retrieval trial.
#[derive(Clone, Debug)]
pub struct PhaseInstance {
    pub p: usize,
    pub x: PhaseX,
    pub y: PrecReal,
    pub support: ComplexSupport,
    pub beta_true: Option<Vec<usize>>,
    pub n_bits: Option<u32>,
    pub precision: Option<u32>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetKind {
    Single,
    Dependent,
}

/// One subset-sum trial (single-equation or dependent products).
#[derive(Clone, Debug)]
pub struct SubsetSumGenInstance {
    pub kind: SubsetKind,
    pub x: Vec<BigInt>,
    pub target: BigInt,
    pub planted: Option<Vec<u8>>,
    pub n_bits: u32,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub enum GeneratedInstance {
    Regression(Box<RegressionInstance>),
    Phase(Box<PhaseInstance>),
    SubsetSum(SubsetSumGenInstance),
}

fn need<T: Copy>(v: Option<T>, what: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("missing parameter: {}", what))
}

fn screen_policy(dim: usize) -> PrecisionPolicy {
    PrecisionPolicy::for_relation(dim + 1, 64)
}

fn clog2(p: usize) -> u32 {
    p.max(1).next_power_of_two().trailing_zeros()
}

/// Working precision the JIRSS-family PSLQ calls will want, from the data
/// parameters; supports are generated a margin above it.
fn jirss_support_prec(r: usize, coeff_bits: u32) -> u32 {
    PrecisionPolicy::for_relation(r + 2, coeff_bits).working_bits + 64
}

fn exact_div_by_int(x: &PrecReal, q: u64, prec: u32) -> PrecReal {
    if q.is_power_of_two() {
        x.scale2(-(q.trailing_zeros() as i64))
    } else {
        x.div_prec(&PrecReal::from_u64(q, 64), prec)
    }
}

/// Builds the planted instance for `kind`; every random draw comes from
/// `(seed, tag)` streams and the planted identity is checked before
/// returning.
pub fn gen_instance(kind: InstanceKind, params: &GenParams, seed: u64) -> Result<GeneratedInstance, String> {
    if params.p == 0 {
        return Err("p must be >= 1".into());
    }
    if params.n == 0 {
        return Err("n must be >= 1".into());
    }
    if params.support_size == Some(0) {
        return Err("support_size must be >= 1".into());
    }
    if params.q == Some(0) || params.r == Some(0) {
        return Err("q and r must be >= 1".into());
    }
    if params.n_bits == Some(0) || params.precision == Some(0) {
        return Err("n_bits and precision must be >= 1".into());
    }
    match kind {
        InstanceKind::Elo => gen_elo(params, seed),
        InstanceKind::Lbr => gen_lbr(params, seed),
        InstanceKind::Jirss => gen_jirss(params, seed),
        InstanceKind::Ihdr => gen_ihdr(params, seed),
        InstanceKind::Mirr => gen_mirr(params, seed, false),
        InstanceKind::Mirrc => gen_mirr(params, seed, true),
        InstanceKind::PhaseD => gen_phase(params, seed, true),
        InstanceKind::PhaseC => gen_phase(params, seed, false),
        InstanceKind::SubsetSum => gen_subsetsum(params, seed, SubsetKind::Single),
        InstanceKind::DepSubsetSum => gen_subsetsum(params, seed, SubsetKind::Dependent),
    }
}

fn gen_elo(params: &GenParams, seed: u64) -> Result<GeneratedInstance, String> {
    let (n, p) = (params.n, params.p);
    let bits = need(params.n_bits, "n_bits")?;
    let r = params.r.unwrap_or(1);
    let dist = DistributionSpec::DiscreteUniform { bits };
    let mut xr = stream_rng(seed, 0, "x");
    let x: Vec<Vec<BigInt>> = (0..n)
        .map(|_| (0..p).map(|_| dist.sample_int(&mut xr).expect("discrete")).collect())
        .collect();
    let mut br = stream_rng(seed, 0, "beta");
    let beta: Vec<BigInt> = if r == 1 {
        (0..p).map(|_| uniform_bigint_range(&mut br, &BigInt::zero(), &BigInt::one())).collect()
    } else {
        let lo = -BigInt::from(r);
        let hi = BigInt::from(r);
        (0..p).map(|_| uniform_bigint_range(&mut br, &lo, &hi)).collect()
    };
    let y: Vec<BigInt> =
        x.iter().map(|row| row.iter().zip(&beta).map(|(a, b)| a * b).sum()).collect();
    let inst = RegressionInstance {
        kind: "elo".into(),
        n,
        p,
        x: MatrixData::Int(x),
        y: VectorData::Int(y),
        support: None,
        params: InstanceParams {
            r: Some(BigInt::from(r)),
            r_hat: Some(BigInt::from(r)),
            w_hat: Some(PrecReal::one(64)),
            n_bits: Some(bits),
            ..Default::default()
        },
        beta_true: Some(
            beta.into_iter().map(|k| SupportValue::Rational(Rational::new(k, BigInt::one()))).collect(),
        ),
        seed,
    };
    Ok(GeneratedInstance::Regression(Box::new(inst)))
}

fn gen_lbr(params: &GenParams, seed: u64) -> Result<GeneratedInstance, String> {
    let (n, p) = (params.n, params.p);
    let bits = need(params.n_bits, "n_bits")?;
    let prec = need(params.precision, "precision")?;
    let q = params.q.unwrap_or(1);
    let r = params.r.unwrap_or(1);
    let mut xr = stream_rng(seed, 0, "x");
    let x: Vec<Vec<PrecReal>> =
        (0..n).map(|_| (0..p).map(|_| uniform_unit(&mut xr, prec)).collect()).collect();
    let mut br = stream_rng(seed, 0, "beta");
    let kq = BigInt::from(r * q);
    let ks: Vec<BigInt> = (0..p).map(|_| uniform_bigint_range(&mut br, &(-kq.clone()), &kq)).collect();

    // noise w_i uniform in (-sigma, sigma), dyadic
    let sigma = params.sigma_log2.map(|k| PrecReal::exact_dyadic(BigInt::one(), k));
    let mut wr = stream_rng(seed, 0, "w");
    let w: Vec<PrecReal> = (0..n)
        .map(|_| match &sigma {
            Some(s) => crate::rng::uniform_symmetric(&mut wr, s, prec),
            None => PrecReal::zero(prec),
        })
        .collect();

    // y_i = (1/q) * (sum x_ij K_j + q w_i), exact when q is a power of two
    let prec_y = prec + bits + 256;
    let y: Vec<PrecReal> = x
        .iter()
        .zip(&w)
        .map(|(row, wi)| {
            let mut scaled = wi.mul_bigint_exact(&BigInt::from(q));
            for (xij, k) in row.iter().zip(&ks) {
                scaled = scaled.add_exact(&xij.mul_bigint_exact(k));
            }
            exact_div_by_int(&scaled, q, prec_y)
        })
        .collect();

    let beta_true: Vec<SupportValue> = ks
        .iter()
        .map(|k| SupportValue::Rational(Rational::new(k.clone(), BigInt::from(q))))
        .collect();
    let inst = RegressionInstance {
        kind: "lbr".into(),
        n,
        p,
        x: MatrixData::Real(x),
        y: VectorData::Real(y),
        support: None,
        params: InstanceParams {
            q: Some(BigInt::from(q)),
            q_hat: Some(BigInt::from(q)),
            r: Some(BigInt::from(r)),
            r_hat: Some(BigInt::from(r)),
            w_hat: Some(sigma.unwrap_or_else(|| PrecReal::zero(64))),
            n_bits: Some(bits),
            sigma: params.sigma_log2.map(|k| PrecReal::exact_dyadic(BigInt::one(), k)),
            precision: Some(prec),
            ..Default::default()
        },
        beta_true: Some(beta_true),
        seed,
    };
    Ok(GeneratedInstance::Regression(Box::new(inst)))
}

fn gen_jirss(params: &GenParams, seed: u64) -> Result<GeneratedInstance, String> {
    let (n, p) = (params.n, params.p);
    let bits = need(params.n_bits, "n_bits")?;
    let r_sup = params.support_size.unwrap_or(2);
    let coeff_bits = bits + clog2(p) + 8;
    let sup_prec = jirss_support_prec(r_sup, coeff_bits);
    let support = SupportSet::default_square_roots(r_sup, sup_prec, &screen_policy(r_sup + 1))
        .map_err(|e| e.to_string())?;

    let mut xr = stream_rng(seed, 0, "x");
    let x: Vec<Vec<BigInt>> =
        (0..n).map(|_| (0..p).map(|_| uniform_pow2(&mut xr, bits)).collect()).collect();
    let mut ar = stream_rng(seed, 0, "assign");
    let assign: Vec<usize> = (0..p)
        .map(|_| usize::try_from(uniform_bigint_range(&mut ar, &BigInt::zero(), &BigInt::from(r_sup as u64 - 1))).unwrap())
        .collect();
    let y: Vec<PrecReal> = x
        .iter()
        .map(|row| {
            let mut acc = PrecReal::zero(64);
            for (xij, &k) in row.iter().zip(&assign) {
                acc = acc.add_exact(&support.values()[k].mul_bigint_exact(xij));
            }
            acc
        })
        .collect();
    let inst = RegressionInstance {
        kind: "jirss".into(),
        n,
        p,
        x: MatrixData::Int(x),
        y: VectorData::Real(y),
        support: Some(support),
        params: InstanceParams { n_bits: Some(bits), ..Default::default() },
        beta_true: Some(assign.into_iter().map(SupportValue::Irrational).collect()),
        seed,
    };
    Ok(GeneratedInstance::Regression(Box::new(inst)))
}

fn gen_ihdr(params: &GenParams, seed: u64) -> Result<GeneratedInstance, String> {
    let p = params.p;
    let prec = need(params.precision, "precision")?;
    let r_sup = params.support_size.unwrap_or(2);
    let support = SupportSet::default_square_roots(r_sup, prec + 128, &screen_policy(r_sup + 1))
        .map_err(|e| e.to_string())?;

    let mut xr = stream_rng(seed, 0, "x");
    let x: Vec<PrecReal> = (0..p).map(|_| uniform_unit(&mut xr, prec)).collect();
    let mut ar = stream_rng(seed, 0, "assign");
    let assign: Vec<usize> = (0..p)
        .map(|_| usize::try_from(uniform_bigint_range(&mut ar, &BigInt::zero(), &BigInt::from(r_sup as u64 - 1))).unwrap())
        .collect();
    let mut y = PrecReal::zero(64);
    for (xi, &k) in x.iter().zip(&assign) {
        y = y.add_exact(&xi.mul_exact(&support.values()[k]));
    }
    let inst = RegressionInstance {
        kind: "ihdr".into(),
        n: 1,
        p,
        x: MatrixData::Real(vec![x]),
        y: VectorData::Real(vec![y]),
        support: Some(support),
        params: InstanceParams { precision: Some(prec), ..Default::default() },
        beta_true: Some(assign.into_iter().map(SupportValue::Irrational).collect()),
        seed,
    };
    Ok(GeneratedInstance::Regression(Box::new(inst)))
}

fn gen_mirr(params: &GenParams, seed: u64, continuous: bool) -> Result<GeneratedInstance, String> {
    let (n, p) = (params.n, params.p);
    let bits = need(params.n_bits, "n_bits")?;
    let q = params.q.unwrap_or(2);
    let r = params.r.unwrap_or(2);
    let r_sup = params.support_size.unwrap_or(2);
    let n_rational = params.rational_count.unwrap_or(p / 2);
    if n_rational > p {
        return Err("rational_count exceeds p".into());
    }
    // discrete: the stage-1 relation coefficients scale with the data, so
    // the support needs headroom above the PSLQ working precision;
    // continuous: the coefficients are at most q_hat, so the X precision
    // dominates
    let sup_prec = if continuous {
        need(params.precision, "precision")? + 128
    } else {
        let coeff_bits = bits + clog2(p) + 64 - (q.leading_zeros()).min(63) + 8;
        jirss_support_prec(r_sup, coeff_bits)
    };
    let support = SupportSet::default_square_roots(r_sup, sup_prec, &screen_policy(r_sup + 2))
        .map_err(|e| e.to_string())?;

    // random positions for the rational slots
    let mut posr = stream_rng(seed, 0, "slots");
    let mut slots: Vec<usize> = (0..p).collect();
    for i in (1..p).rev() {
        let j = usize::try_from(uniform_bigint_range(&mut posr, &BigInt::zero(), &BigInt::from(i as u64))).unwrap();
        slots.swap(i, j);
    }
    let rational_slots: std::collections::BTreeSet<usize> = slots[..n_rational].iter().copied().collect();

    let mut br = stream_rng(seed, 0, "beta");
    let kq = BigInt::from(r * q);
    let mut ar = stream_rng(seed, 0, "assign");
    let beta: Vec<SupportValue> = (0..p)
        .map(|j| {
            if rational_slots.contains(&j) {
                let k = uniform_bigint_range(&mut br, &(-kq.clone()), &kq);
                SupportValue::Rational(Rational::new(k, BigInt::from(q)))
            } else {
                let k = usize::try_from(uniform_bigint_range(&mut ar, &BigInt::zero(), &BigInt::from(r_sup as u64 - 1))).unwrap();
                SupportValue::Irrational(k)
            }
        })
        .collect();

    let mut xr = stream_rng(seed, 0, "x");
    let prec_y = sup_prec + bits + 256;

    let build_y = |row_int: Option<&[BigInt]>, row_real: Option<&[PrecReal]>| -> PrecReal {
        // q * y accumulated exactly, then divided once
        let mut scaled = PrecReal::zero(64);
        for j in 0..p {
            let term = match &beta[j] {
                SupportValue::Rational(rat) => {
                    let k = rat.numer() * BigInt::from(q) / rat.denom();
                    match (row_int, row_real) {
                        (Some(ri), _) => PrecReal::from_bigint(&(&ri[j] * &k), 64),
                        (_, Some(rr)) => rr[j].mul_bigint_exact(&k),
                        _ => unreachable!(),
                    }
                }
                SupportValue::Irrational(t) => {
                    let a = &support.values()[*t];
                    match (row_int, row_real) {
                        (Some(ri), _) => a.mul_bigint_exact(&(&ri[j] * BigInt::from(q))),
                        (_, Some(rr)) => a.mul_exact(&rr[j]).mul_bigint_exact(&BigInt::from(q)),
                        _ => unreachable!(),
                    }
                }
            };
            scaled = scaled.add_exact(&term);
        }
        exact_div_by_int(&scaled, q, prec_y)
    };

    let (x, y, kind, prec_field) = if continuous {
        let prec = need(params.precision, "precision")?;
        let x: Vec<Vec<PrecReal>> =
            (0..n).map(|_| (0..p).map(|_| uniform_unit(&mut xr, prec)).collect()).collect();
        let y: Vec<PrecReal> = x.iter().map(|row| build_y(None, Some(row))).collect();
        (MatrixData::Real(x), y, "mirrc", Some(prec))
    } else {
        let x: Vec<Vec<BigInt>> =
            (0..n).map(|_| (0..p).map(|_| uniform_pow2(&mut xr, bits)).collect()).collect();
        let y: Vec<PrecReal> = x.iter().map(|row| build_y(Some(row), None)).collect();
        (MatrixData::Int(x), y, "mirr", None)
    };

    let inst = RegressionInstance {
        kind: kind.into(),
        n,
        p,
        x,
        y: VectorData::Real(y),
        support: Some(support),
        params: InstanceParams {
            q: Some(BigInt::from(q)),
            q_hat: Some(BigInt::from(q)),
            r: Some(BigInt::from(r)),
            r_hat: Some(BigInt::from(r)),
            r_tilde: Some(BigInt::from(r)),
            n_bits: Some(bits),
            precision: prec_field,
            ..Default::default()
        },
        beta_true: Some(beta),
        seed,
    };
    Ok(GeneratedInstance::Regression(Box::new(inst)))
}

fn gen_phase(params: &GenParams, seed: u64, discrete: bool) -> Result<GeneratedInstance, String> {
    let p = params.p;
    let sup_prec;
    let coeff_bits;
    if discrete {
        let bits = need(params.n_bits, "n_bits")?;
        coeff_bits = 2 * bits + 2 * clog2(p) + 8;
        sup_prec = PrecisionPolicy::for_relation(4, coeff_bits).working_bits + 64;
    } else {
        let prec = need(params.precision, "precision")?;
        coeff_bits = 8;
        sup_prec = prec + 128;
    }
    let support =
        ComplexSupport::default_support(sup_prec, &screen_policy(3)).map_err(|e| e.to_string())?;
    let r_sup = support.len();

    let mut ar = stream_rng(seed, 0, "assign");
    let assign: Vec<usize> = (0..p)
        .map(|_| usize::try_from(uniform_bigint_range(&mut ar, &BigInt::zero(), &BigInt::from(r_sup as u64 - 1))).unwrap())
        .collect();

    let mut xr = stream_rng(seed, 0, "x");
    let (x, y) = if discrete {
        let bits = params.n_bits.unwrap();
        let x: Vec<BigInt> = (0..p).map(|_| uniform_pow2(&mut xr, bits)).collect();
        // real-valued default support: Y = |sum X_i a_i| exactly
        let mut lin = PrecReal::zero(64);
        for (xi, &k) in x.iter().zip(&assign) {
            lin = lin.add_exact(&support.values()[k].re.mul_bigint_exact(xi));
        }
        (PhaseX::Int(x), lin.abs())
    } else {
        let prec = params.precision.unwrap();
        let x: Vec<PrecReal> = (0..p).map(|_| uniform_unit(&mut xr, prec)).collect();
        let mut lin = PrecReal::zero(64);
        for (xi, &k) in x.iter().zip(&assign) {
            lin = lin.add_exact(&support.values()[k].re.mul_exact(xi));
        }
        (PhaseX::Real(x), lin.abs())
    };
    let _ = coeff_bits;

    let inst = PhaseInstance {
        p,
        x,
        y,
        support,
        beta_true: Some(assign),
        n_bits: if discrete { params.n_bits } else { None },
        precision: if discrete { None } else { params.precision },
        seed,
    };
    Ok(GeneratedInstance::Phase(Box::new(inst)))
}

fn gen_subsetsum(params: &GenParams, seed: u64, kind: SubsetKind) -> Result<GeneratedInstance, String> {
    let p = params.p;
    let bits = need(params.n_bits, "n_bits")?;
    let mut xr = stream_rng(seed, 0, "x");
    let x: Vec<BigInt> = (0..p).map(|_| uniform_pow2(&mut xr, bits)).collect();
    let mut er = stream_rng(seed, 0, "e");
    match kind {
        SubsetKind::Single => {
            let e: Vec<u8> = (0..p)
                .map(|_| u8::try_from(uniform_bigint_range(&mut er, &BigInt::zero(), &BigInt::one())).unwrap())
                .collect();
            let target: BigInt =
                x.iter().zip(&e).filter(|(_, &b)| b == 1).map(|(w, _)| w.clone()).sum();
            Ok(GeneratedInstance::SubsetSum(SubsetSumGenInstance {
                kind,
                x,
                target,
                planted: Some(e),
                n_bits: bits,
                seed,
            }))
        }
        SubsetKind::Dependent => {
            let prods = pair_products(&x);
            let xi: Vec<u8> = (0..prods.len())
                .map(|_| u8::try_from(uniform_bigint_range(&mut er, &BigInt::zero(), &BigInt::one())).unwrap())
                .collect();
            let target: BigInt =
                prods.iter().zip(&xi).filter(|(_, &b)| b == 1).map(|(w, _)| w.clone()).sum();
            Ok(GeneratedInstance::SubsetSum(SubsetSumGenInstance {
                kind,
                x,
                target,
                planted: Some(xi),
                n_bits: bits,
                seed,
            }))
        }
    }
}

// --- solving ---

fn max_bits_int(rows: &[Vec<BigInt>]) -> u32 {
    rows.iter().flat_map(|r| r.iter().map(|v| v.bits() as u32)).max().unwrap_or(1)
}

/// Policy for the PSLQ stages of a regression instance, sized from the data.
pub fn policy_for_instance(inst: &RegressionInstance) -> PrecisionPolicy {
    let p = inst.p;
    let r_sup = inst.support.as_ref().map_or(0, |s| s.len());
    let sup_prec = inst
        .support
        .as_ref()
        .map(|s| s.values().iter().map(|v| v.precision()).max().unwrap_or(64))
        .unwrap_or(64);
    let qh_bits = inst.params.q_hat.as_ref().map(|q| q.bits() as u32).unwrap_or(1);
    match inst.kind.as_str() {
        "jirss" => {
            let xb = if let MatrixData::Int(rows) = &inst.x { max_bits_int(rows) } else { 1 };
            PrecisionPolicy::for_relation_with_data(r_sup + 1, xb + clog2(p) + 8, sup_prec)
        }
        "mirr" => {
            let xb = if let MatrixData::Int(rows) = &inst.x { max_bits_int(rows) } else { 1 };
            PrecisionPolicy::for_relation_with_data(r_sup + 2, xb + clog2(p) + qh_bits + 8, sup_prec)
        }
        "ihdr" => {
            let prec = inst.params.precision.unwrap_or(256);
            PrecisionPolicy::for_relation_with_data(1 + p * r_sup, 8, prec.max(sup_prec))
        }
        "mixed_ira" | "mirrc" => {
            let prec = inst.params.precision.unwrap_or(256);
            let rh_bits = inst.params.r_hat.as_ref().map(|r| r.bits() as u32).unwrap_or(1);
            PrecisionPolicy::for_relation_with_data(
                1 + p * r_sup + p,
                qh_bits + rh_bits + 8,
                prec.max(sup_prec),
            )
        }
        _ => PrecisionPolicy::for_relation(4, 32),
    }
}

/// Policy for the `Y^2` relation of a phase instance.
pub fn policy_for_phase(inst: &PhaseInstance) -> PrecisionPolicy {
    let r = inst.support.len();
    let sprime_dim = 1 + r * (r + 1) / 2;
    match &inst.x {
        PhaseX::Int(x) => {
            let xb = x.iter().map(|v| v.bits() as u32).max().unwrap_or(1);
            let sup_prec = inst.support.sprime().iter().map(|v| v.precision()).max().unwrap_or(64);
            PrecisionPolicy::for_relation_with_data(sprime_dim, 2 * xb + 2 * clog2(inst.p) + 8, sup_prec)
        }
        PhaseX::Real(x) => {
            let prec = x.iter().map(|v| v.precision()).max().unwrap_or(256);
            let dim = 1 + inst.p * r + inst.p * (inst.p - 1) / 2 * (r + r * (r - 1) / 2);
            PrecisionPolicy::for_relation_with_data(dim, 8, prec)
        }
    }
}

/// Outcome envelope for the CLI: the report as JSON plus the exit semantics.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub json: Value,
    pub ok: bool,
    pub exact: Option<bool>,
}

/// Re-labels an n = 1 continuous mixed instance so the single-relation
/// mixed solver handles it (the model is the same; only the algorithm
/// differs).
pub fn as_mixed_ira(inst: &GeneratedInstance) -> Result<GeneratedInstance, String> {
    match inst {
        GeneratedInstance::Regression(r) if r.kind == "mixed_ira" => Ok(inst.clone()),
        GeneratedInstance::Regression(r) if r.kind == "mirrc" && r.n == 1 => {
            let mut alt = (**r).clone();
            alt.kind = "mixed_ira".into();
            Ok(GeneratedInstance::Regression(Box::new(alt)))
        }
        _ => Err("mixed-ira needs an n = 1 continuous mixed instance (kind mirrc)".into()),
    }
}

/// Dispatch one instance to its solver, with per-instance deterministic
/// randomness for the randomized stages.
pub fn solve_generated(inst: &GeneratedInstance) -> Result<SolveOutcome, String> {
    match inst {
        GeneratedInstance::Regression(r) => solve_regression(r),
        GeneratedInstance::Phase(ph) => solve_phase(ph),
        GeneratedInstance::SubsetSum(ss) => solve_subsetsum(ss),
    }
}

fn solve_regression(inst: &RegressionInstance) -> Result<SolveOutcome, String> {
    let policy = policy_for_instance(inst);
    let params_echo = instance_to_json(inst)["params"].clone();
    let seed = inst.seed;
    let one = BigInt::one();
    let beta_true = inst.beta_true.clone();
    let report = match inst.kind.as_str() {
        "elo" => {
            let (x, y) = require_int(inst)?;
            let r_hat = inst.params.r_hat.clone().unwrap_or_else(|| one.clone());
            let w_hat = inst
                .params
                .w_hat
                .as_ref()
                .map(crate::recovery::ceil_to_int)
                .unwrap_or_else(|| one.clone());
            RecoveryReport::from_run(beta_true.as_deref(), |c| {
                let mut rng = stream_rng(seed, 0, "elo_z");
                elo(y, x, &r_hat, &w_hat, &mut rng, c)
                    .map(|v| v.into_iter().map(|k| SupportValue::Rational(Rational::new(k, BigInt::one()))).collect())
            })
        }
        "lbr" => {
            let (x, y) = require_real(inst)?;
            let n_bits = inst.params.n_bits.ok_or("lbr needs n_bits")?;
            let q_hat = inst.params.q_hat.clone().unwrap_or_else(|| one.clone());
            let r_hat = inst.params.r_hat.clone().unwrap_or_else(|| one.clone());
            let w_hat = inst.params.w_hat.clone().unwrap_or_else(|| PrecReal::zero(64));
            RecoveryReport::from_run(beta_true.as_deref(), |c| {
                let mut rng = stream_rng(seed, 0, "elo_z");
                lbr(y, x, n_bits, &q_hat, &r_hat, &w_hat, &mut rng, c)
                    .map(|v| v.into_iter().map(SupportValue::Rational).collect())
            })
        }
        "jirss" => {
            let (x, y) = require_int_x_real_y(inst)?;
            let support = inst.support.as_ref().ok_or("jirss needs a support")?;
            RecoveryReport::from_run(beta_true.as_deref(), |c| jirss(y, x, support, &policy, c))
        }
        "ihdr" => {
            let (x, y) = require_real(inst)?;
            let support = inst.support.as_ref().ok_or("ihdr needs a support")?;
            RecoveryReport::from_run(beta_true.as_deref(), |c| ihdr(&y[0], &x[0], support, &policy, c))
        }
        "mirr" => {
            let (x, y) = require_int_x_real_y(inst)?;
            let support = inst.support.as_ref().ok_or("mirr needs a support")?;
            let q_hat = inst.params.q_hat.clone().ok_or("mirr needs q_hat")?;
            let r_hat = inst.params.r_hat.clone().unwrap_or_else(|| one.clone());
            RecoveryReport::from_run(beta_true.as_deref(), |c| {
                let mut rng = stream_rng(seed, 0, "elo_z");
                mirr(y, x, &r_hat, &q_hat, support, &policy, &mut rng, c)
            })
        }
        "mirrc" => {
            let (x, y) = require_real(inst)?;
            let support = inst.support.as_ref().ok_or("mirrc needs a support")?;
            let q_hat = inst.params.q_hat.clone().ok_or("mirrc needs q_hat")?;
            let r_hat = inst.params.r_hat.clone().unwrap_or_else(|| one.clone());
            let n_bits = inst.params.n_bits.ok_or("mirrc needs n_bits")?;
            RecoveryReport::from_run(beta_true.as_deref(), |c| {
                let mut rng = stream_rng(seed, 0, "elo_z");
                mirr_c(y, x, n_bits, &r_hat, &q_hat, support, &policy, &mut rng, c)
            })
        }
        "mixed_ira" => {
            let (x, y) = require_real(inst)?;
            let support = inst.support.as_ref().ok_or("mixed_ira needs a support")?;
            let q_hat = inst.params.q_hat.clone().ok_or("mixed_ira needs q_hat")?;
            let r_hat = inst.params.r_hat.clone().unwrap_or_else(|| one.clone());
            RecoveryReport::from_run(beta_true.as_deref(), |c| {
                mixed_ira_only(&y[0], &x[0], &q_hat, &r_hat, support, &policy, c)
            })
        }
        other => return Err(format!("unknown instance kind {:?}", other)),
    };
    let ok = report.estimate.is_ok();
    let exact = report.exact_match;
    let mut json = crate::recovery::io::report_to_json(&report);
    attach_context(&mut json, &inst.kind, params_echo, inst.seed);
    Ok(SolveOutcome { json, ok, exact })
}

fn attach_context(report: &mut Value, kind: &str, params: Value, seed: u64) {
    if let Some(obj) = report.as_object_mut() {
        obj.insert("kind".into(), Value::String(kind.into()));
        obj.insert("params".into(), params);
        obj.insert("seed".into(), Value::from(seed));
    }
}

fn require_int(inst: &RegressionInstance) -> Result<(&Vec<Vec<BigInt>>, &Vec<BigInt>), String> {
    match (&inst.x, &inst.y) {
        (MatrixData::Int(x), VectorData::Int(y)) => Ok((x, y)),
        _ => Err(format!("kind {} needs integer X and Y", inst.kind)),
    }
}

fn require_real(inst: &RegressionInstance) -> Result<(&Vec<Vec<PrecReal>>, &Vec<PrecReal>), String> {
    match (&inst.x, &inst.y) {
        (MatrixData::Real(x), VectorData::Real(y)) => Ok((x, y)),
        _ => Err(format!("kind {} needs real X and Y", inst.kind)),
    }
}

fn require_int_x_real_y(inst: &RegressionInstance) -> Result<(&Vec<Vec<BigInt>>, &Vec<PrecReal>), String> {
    match (&inst.x, &inst.y) {
        (MatrixData::Int(x), VectorData::Real(y)) => Ok((x, y)),
        _ => Err(format!("kind {} needs integer X and real Y", inst.kind)),
    }
}

fn solve_phase(inst: &PhaseInstance) -> Result<SolveOutcome, String> {
    let policy = policy_for_phase(inst);
    let truth: Option<Vec<SupportValue>> = inst
        .beta_true
        .as_ref()
        .map(|t| t.iter().map(|&k| SupportValue::Irrational(k)).collect());
    let report = match &inst.x {
        PhaseX::Int(x) => RecoveryReport::from_run(truth.as_deref(), |c| {
            phase_discrete(&inst.y, x, &inst.support, &policy, c)
        }),
        PhaseX::Real(x) => RecoveryReport::from_run(truth.as_deref(), |c| {
            phase_continuous(&inst.y, x, &inst.support, &policy, c)
        }),
    };
    let ok = report.estimate.is_ok();
    let exact = report.exact_match;
    let mut json = crate::recovery::io::report_to_json(&report);
    let params = json!({
        "n_bits": inst.n_bits.map(Value::from).unwrap_or(Value::Null),
        "precision": inst.precision.map(Value::from).unwrap_or(Value::Null),
    });
    let kind = if matches!(inst.x, PhaseX::Int(_)) { "phase_d" } else { "phase_c" };
    attach_context(&mut json, kind, params, inst.seed);
    Ok(SolveOutcome { json, ok, exact })
}

fn solve_subsetsum(inst: &SubsetSumGenInstance) -> Result<SolveOutcome, String> {
    let mut counters = Counters::new();
    let start = std::time::Instant::now();
    let result = match inst.kind {
        SubsetKind::Single => solve_single(&inst.target, &inst.x, &mut counters),
        SubsetKind::Dependent => solve_dependent_products(&inst.target, &inst.x, &mut counters),
    };
    let wall = start.elapsed().as_secs_f64() * 1e3;
    let (ok, exact, body) = match &result {
        Ok(e) => {
            let exact = inst.planted.as_ref().map(|t| t == e);
            (true, exact, json!({ "status": "ok", "e": e }))
        }
        Err(f) => (false, inst.planted.as_ref().map(|_| false), json!({ "status": "failure", "failure": f.to_string() })),
    };
    let mut report = json!({
        "estimate": body,
        "exact_match": exact,
        "counters": { "lll_invocations": counters.lll_invocations, "pslq_iterations": counters.pslq_iterations },
        "wall_time_ms": wall,
    });
    let kind = match inst.kind { SubsetKind::Single => "subsetsum", SubsetKind::Dependent => "dep_subsetsum" };
    attach_context(&mut report, kind, json!({ "n_bits": inst.n_bits }), inst.seed);
    Ok(SolveOutcome { json: report, ok, exact })
}

// --- JSON for phase and subset-sum instances ---

pub fn phase_instance_to_json(inst: &PhaseInstance) -> Value {
    let x = match &inst.x {
        PhaseX::Int(v) => json!({ "type": "int", "values": v.iter().map(|b| b.to_string()).collect::<Vec<_>>() }),
        PhaseX::Real(v) => json!({ "type": "real", "values": v.iter().map(|b| b.to_string()).collect::<Vec<_>>() }),
    };
    json!({
        "kind": if matches!(inst.x, PhaseX::Int(_)) { "phase_d" } else { "phase_c" },
        "p": inst.p,
        "x": x,
        "y": inst.y.to_string(),
        "support": {
            "values": inst.support.values().iter()
                .map(|a| vec![a.re.to_string(), a.im.to_string()])
                .collect::<Vec<_>>(),
        },
        "beta_true": inst.beta_true.clone().map(Value::from).unwrap_or(Value::Null),
        "n_bits": inst.n_bits.map(Value::from).unwrap_or(Value::Null),
        "precision": inst.precision.map(Value::from).unwrap_or(Value::Null),
        "seed": inst.seed,
    })
}

pub fn phase_instance_from_json(v: &Value) -> Result<PhaseInstance, String> {
    let obj = v.as_object().ok_or("instance must be an object")?;
    let p = obj.get("p").and_then(Value::as_u64).ok_or("p missing")? as usize;
    let xobj = obj.get("x").and_then(Value::as_object).ok_or("x missing")?;
    let ty = xobj.get("type").and_then(Value::as_str).ok_or("x.type missing")?;
    let vals = xobj.get("values").and_then(Value::as_array).ok_or("x.values missing")?;
    let x = match ty {
        "int" => PhaseX::Int(
            vals.iter()
                .map(|s| s.as_str().ok_or("int entry".to_string())?.parse::<BigInt>().map_err(|e| e.to_string()))
                .collect::<Result<_, String>>()?,
        ),
        "real" => PhaseX::Real(
            vals.iter()
                .map(|s| s.as_str().ok_or("real entry".to_string())?.parse::<PrecReal>().map_err(|e| e.to_string()))
                .collect::<Result<_, String>>()?,
        ),
        other => return Err(format!("unknown x type {:?}", other)),
    };
    let y: PrecReal = obj
        .get("y")
        .and_then(Value::as_str)
        .ok_or("y missing")?
        .parse()
        .map_err(|e: crate::arith::ArithError| e.to_string())?;
    let sup = obj.get("support").and_then(Value::as_object).ok_or("support missing")?;
    let values: Vec<PrecComplex> = sup
        .get("values")
        .and_then(Value::as_array)
        .ok_or("support.values missing")?
        .iter()
        .map(|pair| {
            let arr = pair.as_array().ok_or("support entry must be [re, im]")?;
            if arr.len() != 2 {
                return Err("support entry must be [re, im]".to_string());
            }
            let re: PrecReal = arr[0].as_str().ok_or("re")?.parse().map_err(|e: crate::arith::ArithError| e.to_string())?;
            let im: PrecReal = arr[1].as_str().ok_or("im")?.parse().map_err(|e: crate::arith::ArithError| e.to_string())?;
            Ok(PrecComplex::new(re, im))
        })
        .collect::<Result<_, String>>()?;
    let support = ComplexSupport::screened(values, &screen_policy(3)).map_err(|e| e.to_string())?;
    let beta_true = match obj.get("beta_true") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => Some(
            arr.iter()
                .map(|x| x.as_u64().map(|v| v as usize).ok_or("beta_true entry".to_string()))
                .collect::<Result<_, String>>()?,
        ),
        Some(_) => return Err("beta_true must be an array of indices".into()),
    };
    Ok(PhaseInstance {
        p,
        x,
        y,
        support,
        beta_true,
        n_bits: obj.get("n_bits").and_then(Value::as_u64).map(|v| v as u32),
        precision: obj.get("precision").and_then(Value::as_u64).map(|v| v as u32),
        seed: obj.get("seed").and_then(Value::as_u64).unwrap_or(0),
    })
}

pub fn subsetsum_instance_to_json(inst: &SubsetSumGenInstance) -> Value {
    json!({
        "kind": match inst.kind { SubsetKind::Single => "subsetsum", SubsetKind::Dependent => "dep_subsetsum" },
        "p": inst.x.len(),
        "x": inst.x.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "target": inst.target.to_string(),
        "planted": inst.planted.clone().map(Value::from).unwrap_or(Value::Null),
        "n_bits": inst.n_bits,
        "seed": inst.seed,
    })
}

pub fn subsetsum_instance_from_json(v: &Value) -> Result<SubsetSumGenInstance, String> {
    let obj = v.as_object().ok_or("instance must be an object")?;
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("subsetsum") => SubsetKind::Single,
        Some("dep_subsetsum") => SubsetKind::Dependent,
        other => return Err(format!("unknown subset-sum kind {:?}", other)),
    };
    let x: Vec<BigInt> = obj
        .get("x")
        .and_then(Value::as_array)
        .ok_or("x missing")?
        .iter()
        .map(|s| s.as_str().ok_or("x entry".to_string())?.parse::<BigInt>().map_err(|e| e.to_string()))
        .collect::<Result<_, String>>()?;
    let target: BigInt = obj
        .get("target")
        .and_then(Value::as_str)
        .ok_or("target missing")?
        .parse()
        .map_err(|e: num_bigint::ParseBigIntError| e.to_string())?;
    let planted = match obj.get("planted") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => Some(
            arr.iter()
                .map(|b| b.as_u64().map(|v| v as u8).ok_or("planted entry".to_string()))
                .collect::<Result<_, String>>()?,
        ),
        Some(_) => return Err("planted must be an array".into()),
    };
    Ok(SubsetSumGenInstance {
        kind,
        x,
        target,
        planted,
        n_bits: obj.get("n_bits").and_then(Value::as_u64).unwrap_or(0) as u32,
        seed: obj.get("seed").and_then(Value::as_u64).unwrap_or(0),
    })
}

/// Serialize any generated instance; `kind` is embedded for dispatch.
pub fn generated_to_json(inst: &GeneratedInstance) -> Value {
    match inst {
        GeneratedInstance::Regression(r) => instance_to_json(r),
        GeneratedInstance::Phase(p) => phase_instance_to_json(p),
        GeneratedInstance::SubsetSum(s) => subsetsum_instance_to_json(s),
    }
}

/// Load any instance JSON, dispatching on its `kind` field.
pub fn generated_from_json(v: &Value) -> Result<GeneratedInstance, String> {
    let kind = v
        .as_object()
        .and_then(|o| o.get("kind"))
        .and_then(Value::as_str)
        .ok_or("instance kind missing")?;
    match kind {
        "phase_d" | "phase_c" => Ok(GeneratedInstance::Phase(Box::new(phase_instance_from_json(v)?))),
        "subsetsum" | "dep_subsetsum" => {
            Ok(GeneratedInstance::SubsetSum(subsetsum_instance_from_json(v)?))
        }
        _ => Ok(GeneratedInstance::Regression(Box::new(instance_from_json(v)?))),
    }
}

/// Uniform-pair coprimality estimate: fraction of `samples` independent
/// uniform pairs in `{1..range_hi}^2` with gcd 1.
pub fn coprime_fraction_experiment(samples: u64, range_hi: u64, seed: u64) -> f64 {
    assert!(samples > 0 && range_hi > 0);
    let mut rng = stream_rng(seed, 0, "coprime");
    let mut hits = 0u64;
    for _ in 0..samples {
        let a = crate::rng::uniform_range_i64(&mut rng, 1, range_hi as i64) as u64;
        let b = crate::rng::uniform_range_i64(&mut rng, 1, range_hi as i64) as u64;
        if a.gcd(&b) == 1 {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Verifies the planted identity of a freshly generated instance, exactly.
pub fn verify_planted(inst: &GeneratedInstance) -> Result<(), String> {
    match inst {
        GeneratedInstance::SubsetSum(ss) => {
            if let Some(e) = &ss.planted {
                let weights = match ss.kind {
                    SubsetKind::Single => ss.x.clone(),
                    SubsetKind::Dependent => pair_products(&ss.x),
                };
                let sum: BigInt =
                    weights.iter().zip(e).filter(|(_, &b)| b == 1).map(|(w, _)| w.clone()).sum();
                if sum != ss.target {
                    return Err("planted subset-sum does not reproduce the target".into());
                }
            }
            Ok(())
        }
        GeneratedInstance::Phase(ph) => {
            if let Some(assign) = &ph.beta_true {
                // |<X, beta>|^2 must match Y^2 to construction precision
                let lin = match &ph.x {
                    PhaseX::Int(x) => {
                        let mut acc = PrecReal::zero(64);
                        for (xi, &k) in x.iter().zip(assign) {
                            acc = acc.add_exact(&ph.support.values()[k].re.mul_bigint_exact(xi));
                        }
                        acc
                    }
                    PhaseX::Real(x) => {
                        let mut acc = PrecReal::zero(64);
                        for (xi, &k) in x.iter().zip(assign) {
                            acc = acc.add_exact(&ph.support.values()[k].re.mul_exact(xi));
                        }
                        acc
                    }
                };
                if lin.abs() != ph.y {
                    return Err("planted phase instance does not reproduce Y".into());
                }
            }
            Ok(())
        }
        GeneratedInstance::Regression(inst) => {
            if let Some(beta) = &inst.beta_true {
                let yr = match &inst.y {
                    VectorData::Int(v) => v.iter().map(|b| Rational::new(b.clone(), BigInt::one())).collect::<Vec<_>>(),
                    VectorData::Real(v) => v.iter().map(prec_to_rational).collect(),
                };
                let xr = match &inst.x {
                    MatrixData::Int(rows) => rows
                        .iter()
                        .map(|r| r.iter().map(|b| Rational::new(b.clone(), BigInt::one())).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    MatrixData::Real(rows) => {
                        rows.iter().map(|r| r.iter().map(prec_to_rational).collect()).collect()
                    }
                };
                let betar: Vec<Rational> =
                    beta.iter().map(|b| b.as_rational(inst.support.as_ref())).collect();
                let sigma = inst
                    .params
                    .sigma
                    .as_ref()
                    .map(prec_to_rational)
                    .unwrap_or_else(Rational::zero);
                // tolerance: sigma plus the construction rounding allowance
                let tol = sigma
                    + Rational::new(BigInt::one(), BigInt::one() << 512usize)
                        * yr.iter().fold(Rational::one(), |m, v| if v.abs() > m { v.abs() } else { m });
                for (yi, row) in yr.iter().zip(&xr) {
                    let mut acc = Rational::zero();
                    for (xij, bj) in row.iter().zip(&betar) {
                        acc += xij * bj;
                    }
                    if (yi - acc).abs() > tol {
                        return Err("planted regression instance does not reproduce Y".into());
                    }
                }
            }
            Ok(())
        }
    }
}
