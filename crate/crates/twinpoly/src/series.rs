//! The function-field singular series as an exact truncated power series:
//! the polynomials `P_d`, the logarithmic series `lambda`, their exponential
//! `S(u)`, evaluations, Euler products, predictions, and error terms.
//!
//! A [`RationalSeries`] of order `m` stores exact rational coefficients of
//! `u^0 .. u^m`; arithmetic never consults coefficients beyond the stored
//! order. Coefficients grow like `2^k` (through `lambda`), so everything is
//! arbitrary precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::census::gauss_count;
use crate::field::cached_field;
use crate::{Error, Result};

pub type Rat = BigRational;

fn rat_int(n: i128) -> Rat {
    Rat::from(BigInt::from(n))
}

fn rat(n: i128, d: i128) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated power series with exact rational coefficients of `u^0 .. u^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rat>,
}

impl RationalSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        RationalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        RationalSeries {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `u^k`; consults nothing beyond the truncation order.
    pub fn coeff(&self, k: usize) -> &Rat {
        assert!(k <= self.order(), "coefficient beyond truncation order");
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Restriction to a smaller (or equal) order.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order());
        RationalSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Zero-extension to a larger order. Only valid when the receiver is an
    /// exact polynomial rather than a truncation, so the new coefficients
    /// really are zero.
    pub fn padded(&self, order: usize) -> Self {
        assert!(order >= self.order());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rat::zero());
        RationalSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        RationalSeries { coeffs }
    }

    /// Truncated product, to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        RationalSeries { coeffs }
    }

    /// Substitution `u -> u^d`. A series known mod `u^{m+1}` determines the
    /// result mod `u^{d(m+1)}`: coefficients land at multiples of `d` and
    /// everything in between is exactly zero.
    pub fn compose_with_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        let order = self.order() * d + d - 1;
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * d] = c.clone();
        }
        RationalSeries { coeffs }
    }

    /// Formal exponential, same order; the constant term must vanish.
    pub fn exp_series(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let m = self.order();
        let mut out = vec![Rat::zero(); m + 1];
        out[0] = Rat::one();
        // b_n = (1/n) sum_{j=1}^{n} j a_j b_{n-j}
        for n in 1..=m {
            let mut acc = Rat::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc += rat_int(j as i128) * &self.coeffs[j] * &out[n - j];
                }
            }
            out[n] = acc / rat_int(n as i128);
        }
        Ok(RationalSeries { coeffs: out })
    }

    /// Exact evaluation of the stored truncation at a rational point.
    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// `P_d(u) = (1/d) sum_{k|d} mu(k) u^{d - d/k}`, the polynomial with
/// `P_d(1/q) = pi_d(q) q^{-d}`; an exact polynomial of degree < d.
pub fn p_poly(d: usize) -> RationalSeries {
    assert!(d >= 1);
    let mut coeffs = vec![Rat::zero(); d];
    for k in 1..=d {
        if d % k != 0 {
            continue;
        }
        let mu = crate::census::mobius(k as u64);
        if mu != 0 {
            coeffs[d - d / k] += rat(mu as i128, d as i128);
        }
    }
    RationalSeries::new(coeffs)
}

/// `lambda(u) = sum_{k >= 2} (2 - 2^k)/k * u^{k-1}`, truncated at order `m`.
pub fn lambda_series(m: usize) -> RationalSeries {
    assert!(m >= 1);
    let mut coeffs = vec![Rat::zero(); m + 1];
    let mut two_pow = BigInt::from(2);
    for k in 2..=m + 1 {
        two_pow *= 2; // 2^k
        coeffs[k - 1] = Rat::new(BigInt::from(2) - &two_pow, BigInt::from(k));
    }
    RationalSeries::new(coeffs)
}

/// `S(u) = exp(sum_{d >= 1} P_d(u) lambda(u^d))` mod `u^{m+1}`.
///
/// Only `d <= m` contribute: `lambda(u^d)` is divisible by `u^d`.
pub fn s_series(m: usize) -> RationalSeries {
    assert!(m >= 1);
    let mut arg = RationalSeries::zero(m);
    for d in 1..=m {
        let lam = lambda_series(m / d).compose_with_power(d).truncated(m);
        arg = arg.add(&p_poly(d).padded(m).mul(&lam));
    }
    arg.exp_series().expect("argument has zero constant term")
}

/// `S_m(1/q)`: the order-`m` truncation of the singular series evaluated at
/// `u = 1/q`, exact.
pub fn singular_value(q: u64, m: usize) -> Rat {
    s_series(m).eval(&rat(1, q as i128))
}

/// The finite Euler product `prod_{d <= D} ((1 - 2 q^{-d}) / (1 - q^{-d})^2)^{pi_d(q)}`,
/// exact.
///
/// The exponent `pi_d(q)` grows like `q^d / d`, so the exact rational blows
/// up quickly with `D`; use [`euler_product_bounds`] for deep products.
pub fn euler_product(q: u64, dmax: u32) -> Rat {
    assert!(q >= 2 && dmax >= 1);
    let mut acc = Rat::one();
    for d in 1..=dmax {
        let qd = BigInt::from(q).pow(d);
        // (1 - 2/Q) / (1 - 1/Q)^2 = Q(Q-2) / (Q-1)^2
        let num: BigInt = &qd * (&qd - 2u32);
        if num.is_zero() {
            return Rat::zero(); // q = 2, d = 1: local obstruction
        }
        let den: BigInt = (&qd - 1u32).pow(2);
        acc *= rat_pow(Rat::new(num, den), gauss_count(q, d));
    }
    acc
}

fn rat_pow(base: Rat, mut n: u128) -> Rat {
    let mut acc = Rat::one();
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc *= &b;
        }
        if n > 1 {
            b = &b * &b;
        }
        n >>= 1;
    }
    acc
}

/// Certified enclosure of [`euler_product`] by dyadic fixed-point arithmetic
/// with `prec` fractional bits and outward rounding: the true product lies
/// in `[lo, hi]`. All arithmetic is on integers, so the bounds are exact
/// statements, not floating-point estimates.
pub fn euler_product_bounds(q: u64, dmax: u32, prec: u32) -> (Rat, Rat) {
    assert!(q >= 2 && dmax >= 1);
    let scale: BigInt = BigInt::one() << prec;
    let mut lo = scale.clone();
    let mut hi = scale.clone();
    for d in 1..=dmax {
        let qd = BigInt::from(q).pow(d);
        let num: BigInt = &qd * (&qd - 2u32);
        if num.is_zero() {
            return (Rat::zero(), Rat::zero());
        }
        let den: BigInt = (&qd - 1u32).pow(2);
        // factor in (0, 1): dyadic bounds with directed rounding
        let r_lo = (&num * &scale) / &den;
        let r_hi = (&num * &scale + &den - 1) / &den;
        let (f_lo, f_hi) = dyadic_pow_bounds(&r_lo, &r_hi, gauss_count(q, d), prec);
        lo = (&lo * &f_lo) >> prec;
        hi = shr_ceil(&hi * &f_hi, prec);
    }
    (
        Rat::new(lo, scale.clone()),
        Rat::new(hi, scale),
    )
}

fn shr_ceil(x: BigInt, prec: u32) -> BigInt {
    (x + ((BigInt::one() << prec) - 1)) >> prec
}

fn dyadic_pow_bounds(lo: &BigInt, hi: &BigInt, mut n: u128, prec: u32) -> (BigInt, BigInt) {
    let mut acc_lo: BigInt = BigInt::one() << prec;
    let mut acc_hi = acc_lo.clone();
    let mut b_lo = lo.clone();
    let mut b_hi = hi.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc_lo = (&acc_lo * &b_lo) >> prec;
            acc_hi = shr_ceil(&acc_hi * &b_hi, prec);
        }
        n >>= 1;
        if n > 0 {
            b_lo = (&b_lo * &b_lo) >> prec;
            b_hi = shr_ceil(&b_hi * &b_hi, prec);
        }
    }
    (acc_lo, acc_hi)
}

/// The truncated-series prediction `q^d / d^2 * S_{d-1}(1/q)` for
/// `d in {1, 2, 3}`.
pub fn prediction(d: u32, q: u64) -> Result<Rat> {
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDegree(d));
    }
    let s = if d == 1 {
        RationalSeries::new(vec![Rat::one()])
    } else {
        s_series(d as usize - 1)
    };
    let qd = rat_int((q as i128).pow(d));
    Ok(qd / rat_int((d * d) as i128) * s.eval(&rat(1, q as i128)))
}

/// Relative error of the exact count against the prediction:
/// `pi(d, q; (0,1)) / prediction - 1`, exact. When both the count and the
/// prediction vanish the count matches the prediction exactly and the error
/// is zero; a zero prediction against a nonzero count is an error.
pub fn error_term(d: u32, q: u64) -> Result<Rat> {
    let count = match d {
        1 => crate::closed_form::pi1(q)?,
        2 => crate::closed_form::pi2(q)?,
        3 => crate::closed_form::pi3(q)?,
        _ => return Err(Error::UnsupportedDegree(d)),
    };
    let pred = prediction(d, q)?;
    if pred.is_zero() {
        if count == 0 {
            return Ok(Rat::zero());
        }
        return Err(Error::ZeroPrediction { d, q });
    }
    Ok(rat_int(count as i128) / pred - Rat::one())
}

/// Mean of `a_p^2 / p` over primes `p = 1 mod 3` with `7 <= p <= p_max`,
/// exact. The limiting value of the mean is 2.
pub fn sato_tate_average(p_max: u64) -> Result<Rat> {
    assert!(p_max >= 7);
    let mut sum = Rat::zero();
    let mut n = 0u64;
    for p in primes_up_to(p_max) {
        if p < 7 || p % 3 != 1 {
            continue;
        }
        let ctx = cached_field(p, 1)?;
        let a = crate::curve::trace_a(&ctx, ctx.one())? as i128;
        sum += rat(a * a, p as i128);
        n += 1;
    }
    Ok(sum / rat_int(n as i128))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if is_comp[p] {
            continue;
        }
        out.push(p as u64);
        let mut k = p * p;
        while k <= n {
            is_comp[k] = true;
            k += p;
        }
    }
    out
}
