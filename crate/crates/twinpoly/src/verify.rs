//! Verification orchestrator: every cross-check between formula, census,
//! series, curve, and geometry, with fixed bounds and tolerances pinned in
//! code. Each check reports one pass/fail line; the full suite doubles as
//! the acceptance gate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::census::{count_all_scalar_shifts, count_tuple, ShiftTuple};
use crate::closed_form::{pi2, pi3, pi3_shift_ctx};
use crate::curve::{count_points, newform_coefficients, newform_trace, trace_a, TwistCounter};
use crate::field::{cached_field, PrimePower};
use crate::geometry::{d2_divisor_fixed, gamma_fixed, h_n_fixed, twisted_pair_count};
use crate::series::{
    error_term, euler_product_bounds, sato_tate_average, singular_value, s_series,
};
use crate::Result;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: false,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Bounds for the verification suite. The defaults are the acceptance
/// bounds; smaller caps give a faster subset.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub q_max_degree3: u64,
    pub q_max_twisted: u64,
    pub q_max_degree2: u64,
    pub q_max_divisor: u64,
    pub q_max_hasse: u64,
    pub sato_p_max: u64,
    pub geometry: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            q_max_degree3: 64,
            q_max_twisted: 27,
            q_max_degree2: 128,
            q_max_divisor: 64,
            q_max_hasse: 1024,
            sato_p_max: 20_000,
            geometry: true,
        }
    }
}

impl VerifyConfig {
    /// Caps every bound by `q_max` (the statistical prime bound excluded).
    pub fn capped(q_max: u64) -> Self {
        let d = VerifyConfig::default();
        VerifyConfig {
            q_max_degree3: d.q_max_degree3.min(q_max),
            q_max_twisted: d.q_max_twisted.min(q_max),
            q_max_degree2: d.q_max_degree2.min(q_max),
            q_max_divisor: d.q_max_divisor.min(q_max),
            q_max_hasse: d.q_max_hasse.min(q_max),
            ..d
        }
    }
}

/// All prime powers `2 <= q <= n`, ascending.
pub fn prime_powers_up_to(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for p in crate::series::primes_up_to(n) {
        let mut q = p;
        while q <= n {
            out.push(q);
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    out.sort_unstable();
    out
}

fn rat_int(n: i128) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Exact equality of the degree-3 count formula against the census for all
/// prime powers up to the bound; parametrized over the formula so a broken
/// formula is detectable (negative-control test).
pub(crate) fn degree3_formula_check_with<F>(q_max: u64, formula: F) -> Result<CheckResult>
where
    F: Fn(u64) -> Result<u128>,
{
    let name = "degree3-count-formula";
    let mut checked = 0;
    for q in prime_powers_up_to(q_max) {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        let pair = ShiftTuple::scalar_pair(ctx.clone(), ctx.one())?;
        let brute = count_tuple(&pair, 3)? as u128;
        let form = formula(q)?;
        if brute != form {
            return Ok(CheckResult::fail(
                name,
                format!("q={q}: census {brute} != formula {form}"),
            ));
        }
        checked += 1;
    }
    Ok(CheckResult::pass(
        name,
        format!("census = formula at every prime power q <= {q_max} ({checked} fields)"),
    ))
}

/// Criterion: exact degree-3 equality for every prime power `q <= 64`.
pub fn check_degree3_formula(cfg: &VerifyConfig) -> Result<CheckResult> {
    degree3_formula_check_with(cfg.q_max_degree3, pi3)
}

/// Criterion: exact twisted degree-3 equality for every prime power
/// `q <= 27` and every nonzero scalar shift.
pub fn check_twisted_formula(cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "degree3-twisted-count-formula";
    let mut pairs = 0;
    let mut noncube_pairs = 0;
    for q in prime_powers_up_to(cfg.q_max_twisted) {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        let counts = count_all_scalar_shifts(&ctx, 3)?;
        let counter = TwistCounter::new(ctx.clone());
        for h_idx in 1..q {
            let h = ctx.elem(h_idx);
            let brute = counts[h_idx as usize - 1] as u128;
            let form = pi3_shift_ctx(&counter, h)?;
            if brute != form {
                return Ok(CheckResult::fail(
                    name,
                    format!("q={q} h={h_idx}: census {brute} != formula {form}"),
                ));
            }
            pairs += 1;
            if !ctx.is_cube(h)? {
                noncube_pairs += 1;
            }
        }
    }
    Ok(CheckResult::pass(
        name,
        format!(
            "census = formula for {pairs} (q, h) pairs with q <= {}, {noncube_pairs} in non-cube classes",
            cfg.q_max_twisted
        ),
    ))
}

/// Criterion: exact degree-2 equality for every prime power `q <= 128`.
pub fn check_degree2_formula(cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "degree2-count-formula";
    let mut checked = 0;
    for q in prime_powers_up_to(cfg.q_max_degree2) {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        let pair = ShiftTuple::scalar_pair(ctx.clone(), ctx.one())?;
        let brute = count_tuple(&pair, 2)? as u128;
        let form = pi2(q)?;
        if brute != form {
            return Ok(CheckResult::fail(
                name,
                format!("q={q}: census {brute} != formula {form}"),
            ));
        }
        checked += 1;
    }
    Ok(CheckResult::pass(
        name,
        format!("census = formula at every prime power q <= {} ({checked} fields)", cfg.q_max_degree2),
    ))
}

/// Criterion: the order-12 singular series expansion equals
/// `[1, -1, -2, -1, -2, 2, 0, 6, 7, 13, 20, 32, 41]` exactly.
pub fn check_series_coefficients(_cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "series-coefficients";
    let expected: [i128; 13] = [1, -1, -2, -1, -2, 2, 0, 6, 7, 13, 20, 32, 41];
    let s = s_series(12);
    for (k, want) in expected.iter().enumerate() {
        if s.coeff(k) != &rat_int(*want) {
            return Ok(CheckResult::fail(
                name,
                format!("coefficient of u^{k} is {}, expected {want}", s.coeff(k)),
            ));
        }
    }
    Ok(CheckResult::pass(
        name,
        "all 13 coefficients through u^12 match exactly".into(),
    ))
}

/// Criterion: `|S_20(1/q) - EulerProduct_20(q)| <= 1e-8` for `q in {3,4,5}`.
///
/// The depth-20 Euler product is enclosed in certified dyadic bounds, so the
/// comparison against the tolerance is decided rigorously either way.
pub fn check_euler_convergence(_cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "series-euler-convergence";
    let order = 20usize;
    let tolerance = BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(8)));
    let mut details = Vec::new();
    let mut ok = true;
    for q in [3u64, 4, 5] {
        let sv = singular_value(q, order);
        let (lo, hi) = euler_product_bounds(q, order as u32, 192);
        let worst = (&sv - &lo).abs().max((&sv - &hi).abs());
        let best = if sv < lo {
            &lo - &sv
        } else if sv > hi {
            &sv - &hi
        } else {
            BigRational::zero()
        };
        if worst <= tolerance {
            details.push(format!("q={q}: |diff| <= {:.2e} ok", worst.to_f64().unwrap_or(f64::NAN)));
        } else if best > tolerance {
            ok = false;
            details.push(format!(
                "q={q}: |diff| = {:.3e} certified above 1e-8",
                best.to_f64().unwrap_or(f64::NAN)
            ));
        } else {
            ok = false;
            details.push(format!("q={q}: enclosure too wide, raise precision"));
        }
    }
    let detail = details.join("; ");
    Ok(if ok {
        CheckResult::pass(name, detail)
    } else {
        CheckResult::fail(name, detail)
    })
}

/// Criterion: exact zero error terms on the rows where the truncated-series
/// prediction is exact: `d=3` with `q = 2 mod 3`, `d=2` with `q = 1 mod 4`,
/// and all of `d=1`.
pub fn check_zero_error_rows(_cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "zero-error-rows";
    let mut checked = 0;
    for q in [2u64, 5, 8, 11, 17, 23, 29] {
        let e = error_term(3, q)?;
        if !e.is_zero() {
            return Ok(CheckResult::fail(name, format!("d=3 q={q}: error {e}")));
        }
        checked += 1;
    }
    for q in [5u64, 13, 17, 25] {
        let e = error_term(2, q)?;
        if !e.is_zero() {
            return Ok(CheckResult::fail(name, format!("d=2 q={q}: error {e}")));
        }
        checked += 1;
    }
    for q in prime_powers_up_to(16) {
        let e = error_term(1, q)?;
        if !e.is_zero() {
            return Ok(CheckResult::fail(name, format!("d=1 q={q}: error {e}")));
        }
        checked += 1;
    }
    Ok(CheckResult::pass(
        name,
        format!("{checked} zero-error rows hold exactly"),
    ))
}

/// Criterion: the root-pair count on the twisted variety equals `d^2` times
/// the census count for `d in {2,3}` and `q in {2,3,4,5,7,8,9}`.
pub fn check_twisted_pair_oracle(_cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "twisted-pair-oracle";
    let mut checked = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        let pair = ShiftTuple::scalar_pair(ctx.clone(), ctx.one())?;
        for d in [2u32, 3] {
            let brute = count_tuple(&pair, d)?;
            let twisted = twisted_pair_count(q, d)?;
            if twisted != d as u64 * d as u64 * brute {
                return Ok(CheckResult::fail(
                    name,
                    format!("q={q} d={d}: {twisted} != {d}^2 * {brute}"),
                ));
            }
            checked += 1;
        }
    }
    Ok(CheckResult::pass(
        name,
        format!("{checked} (q, d) pairs match d^2 * census exactly"),
    ))
}

/// Criterion: fixed-point counts on the finite strata. The cubic cover has
/// 0 fixed points for `q = 2 mod 3` and for cube twists, 6 for non-cube
/// twists at `q in {4, 7, 13}`; the degree-2 divisor count reproduces the
/// degree-2 formula up to `q <= 64`; the sextic stratum has exactly one
/// fixed point at `q in {3, 9, 27}`.
pub fn check_fixed_point_counts(cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "fixed-point-counts";
    // q = 2 mod 3: no fixed points on the cubic cover for any class
    for q in [2u64, 5, 8, 11] {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        for h in 1..q {
            let got = h_n_fixed(q, h, 3)?;
            if got != 0 {
                return Ok(CheckResult::fail(
                    name,
                    format!("cover over q={q} h={h}: {got} fixed points, expected 0"),
                ));
            }
            let _ = ctx;
        }
    }
    // q = 1 mod 3: 0 on cube classes, 6 on non-cube classes
    for q in [4u64, 7, 13] {
        let pp = PrimePower::factor(q)?;
        let ctx = cached_field(pp.p(), pp.e())?;
        for h in 1..q {
            let expected = if ctx.is_cube(ctx.elem(h))? { 0 } else { 6 };
            let got = h_n_fixed(q, h, 3)?;
            if got != expected {
                return Ok(CheckResult::fail(
                    name,
                    format!("cover over q={q} h={h}: {got} fixed points, expected {expected}"),
                ));
            }
        }
    }
    // divisor count consistent with the degree-2 formula
    for q in prime_powers_up_to(cfg.q_max_divisor) {
        let fixed = d2_divisor_fixed(q)? as u128;
        let lhs = q as u128 * (1 + q as u128 - fixed);
        if lhs % 4 != 0 || lhs / 4 != pi2(q)? {
            return Ok(CheckResult::fail(
                name,
                format!("divisor count at q={q}: q(1+q-{fixed})/4 != pi2"),
            ));
        }
    }
    // the sextic stratum in characteristic 3
    for q in [3u64, 9, 27] {
        let got = gamma_fixed(q, 6)?;
        if got != 1 {
            return Ok(CheckResult::fail(
                name,
                format!("sextic stratum at q={q}: {got} fixed points, expected 1"),
            ));
        }
    }
    Ok(CheckResult::pass(
        name,
        format!(
            "cover cases at q in {{2,4,5,7,8,11,13}}, divisor counts to q <= {}, sextic stratum in char 3",
            cfg.q_max_divisor
        ),
    ))
}

/// Criterion: the newform recursion reproduces the q-expansion table
/// (`a_4 = -2, a_7 = -1, a_13 = 5, a_16 = 4, a_19 = -7`) and matches direct
/// point counts for `p in {2, 5, 7, 13}`, `e <= 3`, `q <= 2197`.
pub fn check_newform_consistency(_cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "newform-consistency";
    let table = newform_coefficients();
    // prime coefficients by direct count
    for p in [7u64, 13, 19] {
        let got = newform_trace(p, 1)?;
        if got != table[p as usize] as i128 {
            return Ok(CheckResult::fail(
                name,
                format!("a_{p} = {got}, table says {}", table[p as usize]),
            ));
        }
    }
    // prime-power coefficients from the coefficient recursion at p = 2
    let a2 = newform_trace(2, 1)?;
    let a4 = a2 * a2 - 2;
    let a8 = a2 * a4 - 2 * a2;
    let a16 = a2 * a8 - 2 * a4;
    if a4 != table[4] as i128 || a16 != table[16] as i128 {
        return Ok(CheckResult::fail(
            name,
            format!("recursion gives a_4={a4}, a_16={a16}; table says {}, {}", table[4], table[16]),
        ));
    }
    // traces against direct counts over extensions
    let mut checked = 0;
    for p in [2u64, 5, 7, 13] {
        for e in 1..=3u32 {
            let q = p.pow(e);
            if q > 2197 {
                continue;
            }
            let ctx = cached_field(p, e)?;
            let direct = 1 + q as i128 - count_points(&ctx, ctx.one())? as i128;
            let rec = newform_trace(p, e)?;
            if rec != direct {
                return Ok(CheckResult::fail(
                    name,
                    format!("p={p} e={e}: recursion {rec} != direct {direct}"),
                ));
            }
            checked += 1;
        }
    }
    Ok(CheckResult::pass(
        name,
        format!("table coefficients and {checked} prime-power traces reproduced"),
    ))
}

/// Criterion: `a_h^2 <= 4q` for every `q <= 1024` away from characteristic
/// 3 and every cube class, and `a = 0` whenever `q = 2 mod 3`.
pub fn check_hasse_and_vanishing(cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "hasse-and-vanishing";
    let mut checked = 0;
    for q in prime_powers_up_to(cfg.q_max_hasse) {
        let pp = PrimePower::factor(q)?;
        if pp.p() == 3 {
            continue;
        }
        let ctx = cached_field(pp.p(), pp.e())?;
        // one representative per cube class
        let mut seen = std::collections::HashSet::new();
        for h_idx in 1..q {
            let h = ctx.elem(h_idx);
            if !seen.insert(ctx.cube_class(h)?) {
                continue;
            }
            let a = trace_a(&ctx, h)? as i128;
            if a * a > 4 * q as i128 {
                return Ok(CheckResult::fail(
                    name,
                    format!("q={q} h={h_idx}: a={a} violates a^2 <= 4q"),
                ));
            }
            if q % 3 == 2 && a != 0 {
                return Ok(CheckResult::fail(
                    name,
                    format!("q={q} h={h_idx}: a={a} nonzero despite q = 2 mod 3"),
                ));
            }
            checked += 1;
            if seen.len() == 3 {
                break;
            }
        }
    }
    Ok(CheckResult::pass(
        name,
        format!("{checked} twist classes satisfy the trace bound and vanishing"),
    ))
}

/// Criterion (the only non-exact one): the mean of `a_p^2 / p` over primes
/// `p = 1 mod 3` up to 20000 lies in `[1.8, 2.2]`; the limit is 2.
pub fn check_sato_tate(cfg: &VerifyConfig) -> Result<CheckResult> {
    let name = "sato-tate-average";
    let avg = sato_tate_average(cfg.sato_p_max)?;
    let lo = BigRational::new(BigInt::from(9), BigInt::from(5));
    let hi = BigRational::new(BigInt::from(11), BigInt::from(5));
    let approx = avg.to_f64().unwrap_or(f64::NAN);
    if avg >= lo && avg <= hi {
        Ok(CheckResult::pass(
            name,
            format!("mean a_p^2/p = {approx:.6} in [1.8, 2.2] up to p = {}", cfg.sato_p_max),
        ))
    } else {
        Ok(CheckResult::fail(
            name,
            format!("mean a_p^2/p = {approx:.6} outside [1.8, 2.2]"),
        ))
    }
}

/// Runs every check in fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut results = vec![
        check_degree3_formula(cfg)?,
        check_twisted_formula(cfg)?,
        check_degree2_formula(cfg)?,
        check_series_coefficients(cfg)?,
        check_euler_convergence(cfg)?,
        check_zero_error_rows(cfg)?,
    ];
    if cfg.geometry {
        results.push(check_twisted_pair_oracle(cfg)?);
        results.push(check_fixed_point_counts(cfg)?);
    }
    results.push(check_newform_consistency(cfg)?);
    results.push(check_hasse_and_vanishing(cfg)?);
    results.push(check_sato_tate(cfg)?);
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_list() {
        assert_eq!(
            prime_powers_up_to(16),
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
        );
        assert_eq!(prime_powers_up_to(1), Vec::<u64>::new());
    }

    #[test]
    fn capped_config() {
        let cfg = VerifyConfig::capped(3);
        assert_eq!(cfg.q_max_degree3, 3);
        assert_eq!(cfg.q_max_degree2, 3);
        assert_eq!(cfg.sato_p_max, 20_000);
    }

    #[test]
    fn subset_bounds_pass_quickly() {
        let cfg = VerifyConfig::capped(5);
        assert!(check_degree3_formula(&cfg).unwrap().passed);
        assert!(check_degree2_formula(&cfg).unwrap().passed);
        assert!(check_twisted_formula(&cfg).unwrap().passed);
    }

    #[test]
    fn negative_control_detects_broken_formula() {
        // an injected off-by-one must FAIL with the check named
        let broken = |q: u64| crate::closed_form::pi3(q).map(|n| n + 1);
        let res = degree3_formula_check_with(5, broken).unwrap();
        assert!(!res.passed);
        assert_eq!(res.name, "degree3-count-formula");
        assert!(res.detail.contains("!="));
    }
}
