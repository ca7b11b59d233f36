//! Point counts and Frobenius traces for `E: X^3 = Y(Y-1)` and its cubic
//! twists `E_h: h X^3 = Y(Y-1)`, plus the attached newform coefficients.
//!
//! The normalized trace `c_q = a_q / sqrt(q)` is never materialized: only
//! the exact rational quantities `a^2/q` and `a * a_h / q` that the counting
//! formulas consume are exposed. In characteristic 3 the curve degenerates
//! and every operation here refuses to run.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::{FieldCtx, FqElem};
use crate::{Error, Result};

/// Trace data for one twist class over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub q: u64,
    /// canonical index of the twist parameter (1 for the untwisted curve)
    pub h_index: u64,
    pub points: u64,
    /// `a = 1 + q - points`
    pub a: i64,
}

impl TraceRecord {
    /// `a^2 / q` as an exact rational.
    pub fn c_sq(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.a as i128 * self.a as i128),
            BigInt::from(self.q),
        )
    }
}

/// Number of projective points of `E_h(F_q)`: the affine solutions of
/// `h x^3 = y^2 - y` plus the single point at infinity, by exhaustive
/// enumeration with a precomputed value-count table for `y^2 - y`.
pub fn count_points(ctx: &FieldCtx, h: FqElem) -> Result<u64> {
    if ctx.p() == 3 {
        return Err(Error::CharacteristicThree);
    }
    if h.is_zero() {
        return Err(Error::ZeroElement);
    }
    let q = ctx.q();
    let mut solutions = vec![0u32; q as usize];
    for y in ctx.enumerate() {
        let v = ctx.mul(y, ctx.sub(y, ctx.one()));
        solutions[v.index() as usize] += 1;
    }
    let mut affine = 0u64;
    for x in ctx.enumerate() {
        let hx3 = ctx.mul(h, ctx.mul(x, ctx.mul(x, x)));
        affine += solutions[hx3.index() as usize] as u64;
    }
    Ok(affine + 1)
}

/// Frobenius trace `a_h = 1 + q - #E_h(F_q)`.
pub fn trace_a(ctx: &FieldCtx, h: FqElem) -> Result<i64> {
    let points = count_points(ctx, h)? as i64;
    Ok(1 + ctx.q() as i64 - points)
}

pub fn trace_record(ctx: &FieldCtx, h: FqElem) -> Result<TraceRecord> {
    let points = count_points(ctx, h)?;
    Ok(TraceRecord {
        q: ctx.q(),
        h_index: h.index(),
        points,
        a: 1 + ctx.q() as i64 - points as i64,
    })
}

/// `c_q^2 = a^2 / q` for the untwisted curve, exact.
pub fn c_squared(ctx: &FieldCtx) -> Result<BigRational> {
    let a = trace_a(ctx, ctx.one())? as i128;
    Ok(BigRational::new(BigInt::from(a * a), BigInt::from(ctx.q())))
}

/// `c_q * c_{q,h} = a * a_h / q`, exact.
pub fn c_product(ctx: &FieldCtx, h: FqElem) -> Result<BigRational> {
    let a = trace_a(ctx, ctx.one())? as i128;
    let ah = trace_a(ctx, h)? as i128;
    Ok(BigRational::new(BigInt::from(a * ah), BigInt::from(ctx.q())))
}

/// Point counter with a per-cube-class cache.
///
/// Counts depend on `h` only through its cube class, so one `O(q)` scan per
/// class serves every `h`. Results are identical with or without the cache;
/// a test pins that down.
pub struct TwistCounter {
    ctx: Arc<FieldCtx>,
    cache: Mutex<HashMap<u64, u64>>,
}

impl TwistCounter {
    pub fn new(ctx: Arc<FieldCtx>) -> Self {
        TwistCounter {
            ctx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn points(&self, h: FqElem) -> Result<u64> {
        let key = self.ctx.cube_class(h)?;
        if let Some(&n) = self.cache.lock().unwrap().get(&key) {
            return Ok(n);
        }
        let n = count_points(&self.ctx, h)?;
        self.cache.lock().unwrap().insert(key, n);
        Ok(n)
    }

    pub fn trace(&self, h: FqElem) -> Result<i64> {
        Ok(1 + self.ctx.q() as i64 - self.points(h)? as i64)
    }
}

/// `alpha_p^m + beta_p^m = 1 + p^m - #E(F_{p^m})`, via the linear recursion
/// `b_{m+1} = a_p b_m - p b_{m-1}` with `b_0 = 2` and `b_1 = a_p` computed
/// by direct count over `F_p`.
pub fn newform_trace(p: u64, m: u32) -> Result<i128> {
    if p == 3 {
        return Err(Error::CharacteristicThree);
    }
    assert!(m >= 1);
    let ctx = crate::field::cached_field(p, 1)?;
    let a_p = trace_a(&ctx, ctx.one())? as i128;
    let mut prev: i128 = 2;
    let mut cur = a_p;
    for _ in 1..m {
        let next = a_p * cur - p as i128 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The q-expansion coefficients `a_n`, `n <= 19`, of the weight-2 level-27
/// newform attached to `E`: nonzero only at
/// `a_1 = 1, a_4 = -2, a_7 = -1, a_13 = 5, a_16 = 4, a_19 = -7`.
pub fn newform_coefficients() -> [i64; 20] {
    let mut a = [0i64; 20];
    a[1] = 1;
    a[4] = -2;
    a[7] = -1;
    a[13] = 5;
    a[16] = 4;
    a[19] = -7;
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn point_count_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(count_points(&f5, f5.one()).unwrap(), 6);
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(count_points(&f7, f7.one()).unwrap(), 9);
        assert_eq!(count_points(&f7, f7.elem(3)).unwrap(), 3);
        assert_eq!(count_points(&f7, f7.elem(2)).unwrap(), 12);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(count_points(&f4, f4.one()).unwrap(), 9);
    }

    #[test]
    fn rejects_characteristic_three_and_zero_twist() {
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(
            count_points(&f9, f9.one()),
            Err(Error::CharacteristicThree)
        ));
        let f5 = make_field(5, 1).unwrap();
        assert!(matches!(
            count_points(&f5, f5.zero()),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn c_squared_examples() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(c_squared(&f4).unwrap(), rat(4, 1));
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(c_squared(&f7).unwrap(), rat(1, 7));
        let f5 = make_field(5, 1).unwrap();
        assert!(c_squared(&f5).unwrap().is_zero());
    }

    #[test]
    fn c_product_distinguishes_twist_classes() {
        let f7 = make_field(7, 1).unwrap();
        // a = -1; a_3 = 5; a_2 = -4
        assert_eq!(c_product(&f7, f7.elem(3)).unwrap(), rat(-5, 7));
        assert_eq!(c_product(&f7, f7.elem(2)).unwrap(), rat(4, 7));
        assert_eq!(c_product(&f7, f7.elem(6)).unwrap(), rat(1, 7));
    }

    #[test]
    fn newform_trace_examples() {
        assert_eq!(newform_trace(7, 1).unwrap(), -1);
        assert_eq!(newform_trace(2, 2).unwrap(), -4);
        assert_eq!(newform_trace(5, 1).unwrap(), 0);
        assert!(newform_trace(3, 1).is_err());
    }

    #[test]
    fn newform_table() {
        let a = newform_coefficients();
        assert_eq!(a[13], 5);
        assert_eq!(a[16], 4);
        assert_eq!(a[2], 0);
        assert_eq!(a[1], 1);
    }

    #[test]
    fn recursion_reproduces_prime_power_coefficients() {
        // coefficient recursion a_{p^{m+1}} = a_p a_{p^m} - p a_{p^{m-1}}
        let table = newform_coefficients();
        let a2 = newform_trace(2, 1).unwrap();
        assert_eq!(a2, table[2] as i128);
        let a4 = a2 * a2 - 2 * 1;
        assert_eq!(a4, table[4] as i128);
        let a8 = a2 * a4 - 2 * a2;
        let a16 = a2 * a8 - 2 * a4;
        assert_eq!(a16, table[16] as i128);
        for p in [7u64, 13, 19] {
            assert_eq!(newform_trace(p, 1).unwrap(), table[p as usize] as i128);
        }
    }

    #[test]
    fn recursion_matches_direct_counts() {
        for p in [2u64, 5, 7, 13] {
            for e in 1..=3u32 {
                let q = p.pow(e);
                if q > 2197 {
                    continue;
                }
                let ctx = make_field(p, e).unwrap();
                let direct = 1 + q as i128 - count_points(&ctx, ctx.one()).unwrap() as i128;
                assert_eq!(newform_trace(p, e).unwrap(), direct, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn twist_class_invariance() {
        for (p, e) in [(2, 2), (7, 1), (13, 1)] {
            let ctx = make_field(p, e).unwrap();
            let mut by_class: HashMap<u64, u64> = HashMap::new();
            for h in ctx.enumerate().skip(1) {
                let n = count_points(&ctx, h).unwrap();
                let class = ctx.cube_class(h).unwrap();
                let entry = by_class.entry(class).or_insert(n);
                assert_eq!(*entry, n, "q={} h={}", ctx.q(), h.index());
            }
        }
    }

    #[test]
    fn cached_counter_matches_direct() {
        let ctx = make_field(13, 1).unwrap();
        let counter = TwistCounter::new(ctx.clone());
        for h in ctx.enumerate().skip(1) {
            assert_eq!(counter.points(h).unwrap(), count_points(&ctx, h).unwrap());
        }
    }

    #[test]
    fn hasse_bound_smoke() {
        for (p, e) in [(2, 1), (2, 2), (5, 1), (7, 1), (11, 1), (13, 1), (2, 4), (5, 2)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            let a = trace_a(&ctx, ctx.one()).unwrap();
            assert!((a * a) as u64 <= 4 * q);
            if q % 3 == 2 {
                assert_eq!(a, 0);
            }
        }
    }
}
