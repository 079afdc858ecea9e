//! Integer-lattice machinery: exact LLL reduction and a brute-force shortest
//! vector oracle for testing.
//!
//! The LLL implementation is the all-integer variant (Gram–Schmidt data kept
//! as the integers `d_i`, `lambda_{i,j} = mu_{i,j} d_j`), so no rounding ever
//! happens regardless of entry size. The recovery lattices have entries of
//! hundreds to thousands of bits and every whp guarantee depends on the
//! reduction being exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Basis of a full-rank integer lattice; `columns[j]` is the basis vector
/// `b_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    d: usize,
    columns: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare,
    Singular,
    DimensionTooLarge { d: usize, max: usize },
    BadDelta,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSquare => write!(f, "basis matrix is not square"),
            LatticeError::Singular => write!(f, "basis matrix is singular"),
            LatticeError::DimensionTooLarge { d, max } => {
                write!(f, "dimension {} exceeds the enumeration limit {}", d, max)
            }
            LatticeError::BadDelta => write!(f, "delta must lie in (1/4, 1)"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl LatticeBasis {
    /// Checks squareness and nonsingularity (exact determinant).
    pub fn new(columns: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let d = columns.len();
        if d == 0 || columns.iter().any(|c| c.len() != d) {
            return Err(LatticeError::NotSquare);
        }
        let basis = LatticeBasis { d, columns };
        if basis.determinant().is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(basis)
    }

    pub fn identity(d: usize) -> Self {
        let columns = (0..d)
            .map(|j| (0..d).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        LatticeBasis { d, columns }
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[BigInt] {
        &self.columns[j]
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.d;
        // work on the transpose-agnostic copy; det is the same
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.columns[j][i].clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
                match swap {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t.div_exact_ref(&prev);
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    pub fn norm_sq(v: &[BigInt]) -> BigInt {
        v.iter().map(|x| x * x).sum()
    }
}

trait DivExactRef {
    fn div_exact_ref(&self, d: &BigInt) -> BigInt;
}

impl DivExactRef for BigInt {
    fn div_exact_ref(&self, d: &BigInt) -> BigInt {
        debug_assert!(!d.is_zero());
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division in fraction-free step");
        q
    }
}

/// LLL reduction parameter as an exact fraction in (1/4, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delta {
    pub num: u32,
    pub den: u32,
}

impl Delta {
    pub const DEFAULT: Delta = Delta { num: 3, den: 4 };

    fn valid(&self) -> bool {
        self.den > 0 && 4 * self.num > self.den && self.num < self.den
    }
}

/// Exact LLL reduction; the output generates the same lattice and its first
/// column has norm within `2^((d-1)/2)` of the shortest vector for
/// delta = 3/4.
pub fn lll_reduce(basis: &LatticeBasis, delta: Delta) -> Result<LatticeBasis, LatticeError> {
    if !delta.valid() {
        return Err(LatticeError::BadDelta);
    }
    let n = basis.d;
    let mut b = basis.columns.clone();

    // all-integer Gram–Schmidt bookkeeping:
    // d[i] = det of the i-th leading Gram minor, lam[i][j] = mu_{i,j} * d[j+1]
    let mut dvec: Vec<BigInt> = vec![BigInt::one(); n + 1];
    let mut lam: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];

    let dot = |a: &[BigInt], c: &[BigInt]| -> BigInt { a.iter().zip(c).map(|(x, y)| x * y).sum() };

    let mut k = 1usize;
    let mut k_max = 0usize;
    dvec[1] = dot(&b[0], &b[0]);
    if dvec[1].is_zero() {
        return Err(LatticeError::Singular);
    }

    macro_rules! red {
        ($k:expr, $l:expr) => {{
            let (k, l) = ($k, $l);
            let two_lam: BigInt = lam[k][l].abs() << 1;
            if two_lam > dvec[l + 1] {
                // q = nearest integer to lam / d
                let q = nearest_div(&lam[k][l], &dvec[l + 1]);
                let (head, tail) = b.split_at_mut(k);
                let bl = &head[l];
                for (x, y) in tail[0].iter_mut().zip(bl.iter()) {
                    *x -= &q * y;
                }
                let t = &q * &dvec[l + 1];
                lam[k][l] -= t;
                for i in 0..l {
                    let t = &q * &lam[l][i];
                    lam[k][i] -= t;
                }
            }
        }};
    }

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&dvec[i + 1] * &u - &lam[k][i] * &lam[j][i]).div_exact_ref(&dvec[i]);
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    dvec[k + 1] = u;
                }
            }
            if dvec[k + 1].is_zero() {
                return Err(LatticeError::Singular);
            }
        }
        loop {
            red!(k, k - 1);
            // Lovasz test: swap iff den*d[k+1]*d[k-1] < num*d[k]^2 - den*lam^2
            let lhs = BigInt::from(delta.den) * &dvec[k + 1] * &dvec[k - 1];
            let rhs = BigInt::from(delta.num) * &dvec[k] * &dvec[k]
                - BigInt::from(delta.den) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // swap b[k], b[k-1] and patch the integer GS data
                b.swap(k, k - 1);
                for j in 0..k.saturating_sub(1) {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let lam_k = lam[k][k - 1].clone();
                let bnew = (&dvec[k - 1] * &dvec[k + 1] + &lam_k * &lam_k).div_exact_ref(&dvec[k]);
                for i in k + 1..=k_max {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&dvec[k + 1] * &lam[i][k - 1] - &lam_k * &t).div_exact_ref(&dvec[k]);
                    lam[i][k - 1] = (&bnew * &t + &lam_k * &lam[i][k]).div_exact_ref(&dvec[k + 1]);
                }
                dvec[k] = bnew;
                if k > 1 {
                    k -= 1;
                } else {
                    break;
                }
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    red!(k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(LatticeBasis { d: n, columns: b })
}

/// Nearest integer to a/b with b > 0 (ties round toward +inf, which is fine
/// for size reduction).
fn nearest_div(a: &BigInt, b: &BigInt) -> BigInt {
    let num: BigInt = (a << 1) + b;
    num.div_floor(&(b << 1u32))
}

const BRUTEFORCE_MAX_DIM: usize = 8;

/// Exhaustive shortest-vector search over integer coefficients bounded by
/// `coeff_bound`; equals the true shortest vector whenever the bound
/// dominates the basis conditioning (the default from
/// [`default_coeff_bound`] always does).
pub fn shortest_vector_bruteforce(
    basis: &LatticeBasis,
    coeff_bound: u64,
) -> Result<Vec<BigInt>, LatticeError> {
    let d = basis.d;
    if d > BRUTEFORCE_MAX_DIM {
        return Err(LatticeError::DimensionTooLarge { d, max: BRUTEFORCE_MAX_DIM });
    }
    // f64 Gram-Schmidt drives the pruning; all accepted norms are re-checked
    // exactly, and the pruning threshold carries a generous slack so the f64
    // roundoff cannot hide a minimizer.
    let cols: Vec<Vec<f64>> = basis
        .columns
        .iter()
        .map(|c| c.iter().map(|x| bigint_to_f64(x)).collect())
        .collect();
    let mut best_vec: Option<Vec<BigInt>> = None;
    let mut best_norm: Option<BigInt> = None;
    for j in 0..d {
        let v = basis.columns[j].clone();
        let n = LatticeBasis::norm_sq(&v);
        if best_norm.as_ref().map_or(true, |b| &n < b) {
            best_norm = Some(n);
            best_vec = Some(v);
        }
    }

    // Gram-Schmidt over f64 for the enumeration bound.
    let gso = f64_gso(&cols, d);

    let bound = coeff_bound as i64;
    let mut coeff = vec![0i64; d];
    enumerate(&gso, basis, d, d, 0.0, &mut coeff, bound, &mut best_vec, &mut best_norm);
    Ok(best_vec.expect("nonsingular basis has a nonzero vector"))
}

struct Gso {
    mu: Vec<Vec<f64>>,
    norm_sq: Vec<f64>,
}

fn f64_gso(cols: &[Vec<f64>], d: usize) -> Option<Gso> {
    let mut star: Vec<Vec<f64>> = cols.to_vec();
    let mut mu = vec![vec![0.0; d]; d];
    let mut norm_sq = vec![0.0; d];
    for i in 0..d {
        for j in 0..i {
            if norm_sq[j] == 0.0 {
                return None;
            }
            let num: f64 = cols[i].iter().zip(&star[j]).map(|(a, b)| a * b).sum();
            mu[i][j] = num / norm_sq[j];
            let mu_ij = mu[i][j];
            let (left, right) = star.split_at_mut(i);
            for (x, y) in right[0].iter_mut().zip(left[j].iter()) {
                *x -= mu_ij * y;
            }
        }
        norm_sq[i] = star[i].iter().map(|x| x * x).sum();
        if !norm_sq[i].is_finite() || norm_sq[i] <= 0.0 {
            return None;
        }
    }
    Some(Gso { mu, norm_sq })
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    gso: &Option<Gso>,
    basis: &LatticeBasis,
    d: usize,
    level: usize,
    partial: f64,
    coeff: &mut Vec<i64>,
    bound: i64,
    best_vec: &mut Option<Vec<BigInt>>,
    best_norm: &mut Option<BigInt>,
) {
    if level == 0 {
        if coeff.iter().all(|&c| c == 0) {
            return;
        }
        // sign symmetry: first nonzero coefficient positive
        if coeff.iter().find(|&&c| c != 0).map_or(false, |&c| c < 0) {
            return;
        }
        let mut v = vec![BigInt::zero(); d];
        for (j, &c) in coeff.iter().enumerate() {
            if c != 0 {
                let cb = BigInt::from(c);
                for (x, y) in v.iter_mut().zip(basis.columns[j].iter()) {
                    *x += &cb * y;
                }
            }
        }
        let n = LatticeBasis::norm_sq(&v);
        if n.is_zero() {
            return;
        }
        if best_norm.as_ref().map_or(true, |b| &n < b) {
            *best_norm = Some(n);
            *best_vec = Some(v);
        }
        return;
    }
    let i = level - 1;
    let limit = best_norm
        .as_ref()
        .map(|b| bigint_to_f64(b) * (1.0 + 1e-9) + 1.0)
        .unwrap_or(f64::INFINITY);
    match gso {
        Some(g) => {
            // center of the admissible interval at this level
            let mut center = 0.0;
            for j in level..d {
                center -= g.mu[j][i] * coeff[j] as f64;
            }
            let slack = (limit - partial).max(0.0);
            let radius = (slack / g.norm_sq[i]).sqrt() + 1.0;
            let lo = ((center - radius).floor() as i64).max(-bound);
            let hi = ((center + radius).ceil() as i64).min(bound);
            for c in lo..=hi {
                coeff[i] = c;
                let diff = c as f64 - center;
                let add = diff * diff * g.norm_sq[i];
                if partial + add > limit {
                    continue;
                }
                enumerate(gso, basis, d, level - 1, partial + add, coeff, bound, best_vec, best_norm);
            }
            coeff[i] = 0;
        }
        None => {
            // degenerate f64 GSO: plain box enumeration
            for c in -bound..=bound {
                coeff[i] = c;
                enumerate(gso, basis, d, level - 1, 0.0, coeff, bound, best_vec, best_norm);
            }
            coeff[i] = 0;
        }
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    crate::arith::PrecReal::from_bigint(x, 64).to_f64()
}

/// Default coefficient box from the Hadamard bound: by Cramer's rule any
/// shortest vector has coefficients bounded by `prod ||b_j|| / |det|`.
pub fn default_coeff_bound(basis: &LatticeBasis) -> u64 {
    let det = basis.determinant().abs();
    if det.is_zero() {
        return 1;
    }
    let prod: f64 = basis
        .columns
        .iter()
        .map(|c| bigint_to_f64(&LatticeBasis::norm_sq(c)).sqrt())
        .product();
    (prod / bigint_to_f64(&det)).ceil().clamp(2.0, 1e6) as u64
}

// --- JSON I/O ---

#[derive(Serialize, Deserialize)]
struct BasisJson {
    d: usize,
    columns: Vec<Vec<String>>,
}

pub fn basis_to_json(basis: &LatticeBasis) -> serde_json::Value {
    serde_json::to_value(BasisJson {
        d: basis.d,
        columns: basis.columns.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect(),
    })
    .expect("basis serialization")
}

pub fn basis_from_json(v: &serde_json::Value) -> Result<LatticeBasis, String> {
    let parsed: BasisJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    if parsed.columns.len() != parsed.d {
        return Err("column count does not match d".into());
    }
    let mut columns = Vec::with_capacity(parsed.d);
    for col in &parsed.columns {
        let mut c = Vec::with_capacity(col.len());
        for s in col {
            c.push(s.parse::<BigInt>().map_err(|e| format!("bad integer {:?}: {}", s, e))?);
        }
        columns.push(c);
    }
    LatticeBasis::new(columns).map_err(|e| e.to_string())
}
