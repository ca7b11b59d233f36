//! The exact counting formulas for `pi(d, q; (0,1))` and `pi(3, q; (0,h))`
//! in degrees 1..3, as integer-exact functions.
//!
//! Every formula is evaluated as an integer numerator divided by `d^2` with
//! a divisibility assertion, never through floating point or radicals: the
//! normalized trace `c_q` is irrational but only ever enters squared or in
//! the product `c_q * c_{q,h}`, and both rearrange to integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::Arc;

use crate::curve::TwistCounter;
use crate::field::{cached_field, FieldCtx, FqElem, PrimePower};
use crate::Result;

/// `pi(1, q; (0,1)) = q`: every monic linear polynomial is irreducible.
pub fn pi1(q: u64) -> Result<u128> {
    PrimePower::factor(q)?;
    Ok(q as u128)
}

/// `pi(2, q; (0,1))`: `q (q - 2 + chi) / 4` for odd `q` with
/// `chi = (-1)^{(q-1)/2}`, and `q (q - 2) / 4` for even `q`.
pub fn pi2(q: u64) -> Result<u128> {
    PrimePower::factor(q)?;
    let q = q as u128;
    let numerator = if q % 2 == 0 {
        q * (q - 2)
    } else {
        let chi: i128 = if (q - 1) / 2 % 2 == 0 { 1 } else { -1 };
        (q as i128 * (q as i128 - 2 + chi)) as u128
    };
    assert!(numerator % 4 == 0, "degree-2 numerator must divide by 4");
    Ok(numerator / 4)
}

/// `pi(3, q; (0,1))`, split by `q mod 3`; the `q = 1 mod 3` branch consumes
/// the curve trace `a` over `F_q` through the integer rearrangement
/// `(q^3 + q a^2 - 3 q^2 - 2q) / 9`.
pub fn pi3(q: u64) -> Result<u128> {
    let pp = PrimePower::factor(q)?;
    let ctx = cached_field(pp.p(), pp.e())?;
    pi3_ctx(&ctx)
}

pub fn pi3_ctx(ctx: &Arc<FieldCtx>) -> Result<u128> {
    let q = ctx.q() as i128;
    let numerator = match q % 3 {
        0 => q * q * q - q * q - 3 * q,
        1 => {
            let a = crate::curve::trace_a(ctx, ctx.one())? as i128;
            q * q * q + q * a * a - 3 * q * q - 2 * q
        }
        _ => q * q * q - q * q - 2 * q,
    };
    assert!(
        numerator >= 0 && numerator % 9 == 0,
        "degree-3 numerator must divide by 9"
    );
    Ok((numerator / 9) as u128)
}

/// `pi(3, q; (0,h))` for nonzero scalar `h`. Only the branch with
/// `q = 1 mod 3` and `h` not a cube differs from [`pi3`]:
/// `(q^3 + q a a_h - 8q) / 9` with `a_h` the trace of the twist `E_h`.
pub fn pi3_shift(q: u64, h_index: u64) -> Result<u128> {
    let pp = PrimePower::factor(q)?;
    let ctx = cached_field(pp.p(), pp.e())?;
    let h = ctx.try_elem(h_index)?;
    let counter = TwistCounter::new(ctx.clone());
    pi3_shift_ctx(&counter, h)
}

pub fn pi3_shift_ctx(counter: &TwistCounter, h: FqElem) -> Result<u128> {
    let ctx = counter.ctx();
    let q = ctx.q() as i128;
    if q % 3 != 1 || ctx.is_cube(h)? {
        return pi3_ctx(ctx);
    }
    let a = counter.trace(ctx.one())? as i128;
    let a_h = counter.trace(h)? as i128;
    let numerator = q * q * q + q * a * a_h - 8 * q;
    assert!(
        numerator >= 0 && numerator % 9 == 0,
        "twisted degree-3 numerator must divide by 9"
    );
    Ok((numerator / 9) as u128)
}

/// Mean of `pi(3, q; (0,h))` over all nonzero `h`, exact; an integer only
/// when `q - 1` divides the sum, so the result is a rational.
pub fn average_pi3(q: u64) -> Result<BigRational> {
    PrimePower::factor(q)?;
    let q = q as i128;
    let linear_coeff: i128 = match q % 3 {
        0 => 3,
        1 => 6,
        _ => 2,
    };
    let numerator = q * q * q - q * q - linear_coeff * q;
    Ok(BigRational::new(BigInt::from(numerator), BigInt::from(9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{count_all_scalar_shifts, count_tuple, ShiftTuple};
    use crate::field::make_field;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi1_examples() {
        assert_eq!(pi1(2).unwrap(), 2);
        assert_eq!(pi1(9).unwrap(), 9);
        assert!(pi1(6).is_err());
    }

    #[test]
    fn pi2_examples() {
        assert_eq!(pi2(5).unwrap(), 5);
        assert_eq!(pi2(2).unwrap(), 0);
        assert_eq!(pi2(9).unwrap(), 18);
    }

    #[test]
    fn pi3_examples() {
        assert_eq!(pi3(3).unwrap(), 1);
        assert_eq!(pi3(7).unwrap(), 21);
        assert_eq!(pi3(4).unwrap(), 8);
    }

    #[test]
    fn pi3_shift_examples() {
        // 6 is a cube mod 7: reduces to pi3
        assert_eq!(pi3_shift(7, 6).unwrap(), 21);
        assert_eq!(pi3_shift(7, 3).unwrap(), 28);
        assert_eq!(pi3_shift(7, 2).unwrap(), 35);
    }

    #[test]
    fn average_examples() {
        assert_eq!(average_pi3(7).unwrap(), rat(28, 1));
        assert_eq!(average_pi3(5).unwrap(), rat(10, 1));
        assert_eq!(average_pi3(4).unwrap(), rat(8, 3));
    }

    #[test]
    fn formulas_match_census_small() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            let pair = ShiftTuple::scalar_pair(ctx.clone(), ctx.one()).unwrap();
            assert_eq!(count_tuple(&pair, 1).unwrap() as u128, pi1(q).unwrap());
            assert_eq!(count_tuple(&pair, 2).unwrap() as u128, pi2(q).unwrap());
            assert_eq!(count_tuple(&pair, 3).unwrap() as u128, pi3(q).unwrap());
        }
    }

    #[test]
    fn shift_formula_matches_census_small() {
        for (p, e) in [(2, 2), (7, 1), (13, 1), (3, 2), (5, 1)] {
            let ctx = make_field(p, e).unwrap();
            let counts = count_all_scalar_shifts(&ctx, 3).unwrap();
            let counter = TwistCounter::new(ctx.clone());
            for h in 1..ctx.q() {
                assert_eq!(
                    pi3_shift_ctx(&counter, ctx.elem(h)).unwrap(),
                    counts[h as usize - 1] as u128,
                    "q={} h={h}",
                    ctx.q()
                );
            }
        }
    }

    #[test]
    fn shift_sum_equals_average_times_classes() {
        for q in [4u64, 7, 9, 13, 16] {
            let pp = PrimePower::factor(q).unwrap();
            let ctx = make_field(pp.p(), pp.e()).unwrap();
            let counter = TwistCounter::new(ctx.clone());
            let mut sum = BigRational::from(BigInt::from(0));
            for h in 1..q {
                sum += BigRational::from(BigInt::from(
                    pi3_shift_ctx(&counter, ctx.elem(h)).unwrap() as i64,
                ));
            }
            let expected = average_pi3(q).unwrap() * rat(q as i64 - 1, 1);
            assert_eq!(sum, expected, "q={q}");
        }
    }
}
