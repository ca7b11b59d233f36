//! Exact counting of twin prime polynomial pairs over finite fields.
//!
//! A pair of monic irreducible polynomials `f, g` in `F_q[T]` of equal degree
//! `d` with `g = f + h` for a fixed scalar shift `h` is a *twin prime pair*.
//! This crate provides:
//!
//! * exact arithmetic in `F_{p^e}` with deterministic construction
//!   ([`field`]),
//! * monic polynomial enumeration and irreducibility ([`poly`]),
//! * brute-force ground-truth counts of irreducible tuples ([`census`]),
//! * point counts and Frobenius traces for the elliptic curve
//!   `X^3 = Y(Y-1)` and its cubic twists ([`curve`]),
//! * the closed-form counting formulas for degrees 1..3 as integer-exact
//!   functions ([`closed_form`]),
//! * the singular series `S(u)` as a truncated power series with exact
//!   rational coefficients, Euler products, and predictions ([`series`]),
//! * independent fixed-point oracles on the twisted parametrizing
//!   varieties ([`geometry`]),
//! * a verification orchestrator running every cross-check ([`verify`]).
//!
//! All identities are checked with exact integer or rational arithmetic.
//! The only non-exact quantity anywhere is the statistical average of
//! `a_p^2/p` over split primes, which tends to 2.

pub mod census;
pub mod closed_form;
pub mod curve;
pub mod field;
pub mod geometry;
pub mod poly;
pub(crate) mod polyvec;
pub mod report;
pub mod series;
pub mod verify;

use thiserror::Error;

/// Errors shared by all modules of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size {needed} exceeds the configured bound {bound}")]
    SizeBound { needed: u128, bound: u128 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("the zero element is not allowed here")]
    ZeroElement,
    #[error("element index {idx} out of range for a field with {q} elements")]
    IndexRange { idx: u64, q: u64 },
    #[error("element or polynomial does not belong to the expected field")]
    FieldMismatch,
    #[error("cannot embed F_{{{}^{}}} into F_{{{}^{}}}", small.0, small.1, big.0, big.1)]
    IncompatibleEmbedding { small: (u64, u32), big: (u64, u32) },
    #[error("the curve X^3 = Y(Y-1) is degenerate in characteristic 3")]
    CharacteristicThree,
    #[error("invalid shift tuple: {0}")]
    InvalidShifts(String),
    #[error("no closed form for degree {0}")]
    UnsupportedDegree(u32),
    #[error("prediction is zero at d={d}, q={q} while the count is nonzero")]
    ZeroPrediction { d: u32, q: u64 },
    #[error("formal exponential requires zero constant term")]
    NonzeroConstantTerm,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
