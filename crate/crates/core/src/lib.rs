//! Exact-arithmetic toolkit for recovering structured feature vectors from
//! very few linear or magnitude-only measurements.
//!
//! The crate bundles:
//!
//! - [`arith`]: arbitrary-precision integers, rationals and precision-tracked
//!   dyadic reals (the numeric kernel everything else is built on);
//! - [`lattice`]: exact-integer LLL reduction plus a brute-force shortest
//!   vector oracle for testing;
//! - [`relation`]: PSLQ integer relation detection and rational-independence
//!   screening;
//! - [`subsetsum`]: the three LLL-based subset-sum decoders (single equation,
//!   multi-channel, dependent pairwise products);
//! - [`recovery`]: the regression recovery solvers (ELO, LBR, JIRSS, IHDR,
//!   MIRR, MIRR-C, single-call mixed recovery);
//! - [`phase`]: phase retrieval from one magnitude measurement, discrete and
//!   continuous;
//! - [`instruments`]: planted-instance generators, parameter-threshold
//!   calculators and the coprimality experiment.

pub mod arith;
pub mod counters;
pub mod instruments;
pub mod lattice;
pub mod phase;
pub mod recovery;
pub mod relation;
pub mod rng;
pub mod subsetsum;

pub use arith::{PrecComplex, PrecReal, Rational};
pub use num_bigint::BigInt;
