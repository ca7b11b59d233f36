//! Brute-force ground truth: exact counts of irreducible tuples
//! `pi(d, q; h)` and the Gauss count of irreducibles.
//!
//! The census builds one irreducibility bitmap over all `q^d` monic
//! polynomials of degree `d` and answers every shifted count with index
//! arithmetic on that bitmap (shifting digits of the canonical polynomial
//! index), so counting all scalar shifts costs `O(q^d)` bitmap passes
//! rather than `O(q^{d+1})` re-enumerations.

use std::sync::Arc;

use crate::field::{FieldCtx, FqElem, DEFAULT_SIZE_BOUND};
use crate::poly::MonicPoly;
use crate::{Error, Result};

/// Moebius function, by trial-division factorization.
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducibles of degree `d` over `F_q`:
/// `pi_d(q) = (1/d) sum_{k|d} mu(k) q^{d/k}`, asserted integral.
pub fn gauss_count(q: u64, d: u32) -> u128 {
    assert!(d >= 1);
    let mut sum: i128 = 0;
    for k in 1..=d {
        if d % k != 0 {
            continue;
        }
        let mu = mobius(k as u64);
        if mu == 0 {
            continue;
        }
        let pw = (q as i128)
            .checked_pow(d / k)
            .expect("q^{d/k} overflows the Gauss formula");
        sum += mu as i128 * pw;
    }
    assert!(sum >= 0 && sum % d as i128 == 0, "Gauss formula must divide");
    (sum / d as i128) as u128
}

/// Write-once bit array indexed by canonical polynomial index.
#[derive(Clone, PartialEq, Eq)]
pub struct Bitmap {
    words: Vec<u64>,
    len: u64,
}

impl Bitmap {
    fn zeros(len: u64) -> Self {
        Bitmap {
            words: vec![0; (len as usize).div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn flip_all(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        // clear the tail bits beyond len
        let tail = (self.len % 64) as u32;
        if tail != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << tail) - 1;
        }
    }

    fn or_with(&mut self, other: &Bitmap) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

fn checked_poly_space(ctx: &FieldCtx, d: u32) -> Result<u64> {
    let total = (ctx.q() as u128).pow(d);
    if total > DEFAULT_SIZE_BOUND as u128 {
        return Err(Error::SizeBound {
            needed: total,
            bound: DEFAULT_SIZE_BOUND as u128,
        });
    }
    Ok(total as u64)
}

/// Bit `i` set iff the monic degree-`d` polynomial with canonical index `i`
/// is irreducible.
pub fn irreducible_bitmap(ctx: &Arc<FieldCtx>, d: u32) -> Result<Bitmap> {
    irreducible_bitmap_partitioned(ctx, d, 1)
}

/// Same bitmap, built over `parts` disjoint slices of the work and merged.
/// The result is identical for every partitioning; a test pins that down.
pub fn irreducible_bitmap_partitioned(ctx: &Arc<FieldCtx>, d: u32, parts: usize) -> Result<Bitmap> {
    assert!(d >= 1 && parts >= 1);
    let total = checked_poly_space(ctx, d)?;
    let q = ctx.q();
    ctx.ensure_mul_table();
    let mut bitmap = Bitmap::zeros(total);
    match d {
        1 => {
            // every monic linear polynomial is irreducible
            bitmap.flip_all();
            return Ok(bitmap);
        }
        2 | 3 => {
            // Mark every polynomial with a root: for each root x and partial
            // coefficients, the constant term is forced. Irreducible = rootless.
            let chunks = partition(q, parts);
            let merged = run_parts(chunks, |range| {
                let mut local = Bitmap::zeros(total);
                for xi in range {
                    mark_roots(ctx, d, FqElem(xi), &mut local);
                }
                local
            });
            bitmap.or_with(&merged);
            bitmap.flip_all();
        }
        _ => {
            // generic path: one irreducibility test per polynomial
            let chunks = partition(total, parts);
            let merged = run_parts(chunks, |range| {
                let mut local = Bitmap::zeros(total);
                for i in range {
                    if MonicPoly::from_index(ctx.clone(), d, i).is_irreducible() {
                        local.set(i);
                    }
                }
                local
            });
            bitmap.or_with(&merged);
        }
    }
    Ok(bitmap)
}

fn partition(n: u64, parts: usize) -> Vec<std::ops::Range<u64>> {
    let parts = parts.max(1) as u64;
    let step = n.div_ceil(parts);
    (0..parts)
        .map(|k| (k * step).min(n)..((k + 1) * step).min(n))
        .collect()
}

fn run_parts<F>(chunks: Vec<std::ops::Range<u64>>, work: F) -> Bitmap
where
    F: Fn(std::ops::Range<u64>) -> Bitmap + Sync,
{
    if chunks.len() == 1 {
        return work(chunks.into_iter().next().unwrap());
    }
    let locals: Vec<Bitmap> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|range| scope.spawn(|| work(range)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut merged = locals[0].clone();
    for local in &locals[1..] {
        merged.or_with(local);
    }
    merged
}

/// Marks the indices of all degree-`d` monic polynomials vanishing at `x`.
fn mark_roots(ctx: &FieldCtx, d: u32, x: FqElem, out: &mut Bitmap) {
    let q = ctx.q();
    let x2 = ctx.mul(x, x);
    let x3 = ctx.mul(x2, x);
    // lookup tables for a*x and a*x^2 over all element indices
    let mul_x: Vec<FqElem> = (0..q).map(|a| ctx.mul(FqElem(a), x)).collect();
    let neg: Vec<u64> = (0..q).map(|a| ctx.neg(FqElem(a)).index()).collect();
    if d == 2 {
        for a1 in 0..q {
            let v = ctx.add(x2, mul_x[a1 as usize]);
            out.set(a1 * q + neg[v.index() as usize]);
        }
    } else {
        let mul_x2: Vec<FqElem> = (0..q).map(|a| ctx.mul(FqElem(a), x2)).collect();
        for a1 in 0..q {
            let v1 = ctx.add(x3, mul_x2[a1 as usize]);
            let base = a1 * q * q;
            for a2 in 0..q {
                let v = ctx.add(v1, mul_x[a2 as usize]);
                out.set(base + a2 * q + neg[v.index() as usize]);
            }
        }
    }
}

/// A shift polynomial of degree < d: any polynomial, monic or not,
/// including constants and zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    /// little-endian coefficient indices, no trailing zeros
    coeffs: Vec<u64>,
}

impl Shift {
    pub fn zero() -> Self {
        Shift { coeffs: Vec::new() }
    }

    pub fn constant(c: FqElem) -> Self {
        if c.is_zero() {
            Shift::zero()
        } else {
            Shift {
                coeffs: vec![c.index()],
            }
        }
    }

    pub fn from_monic(f: &MonicPoly) -> Self {
        Shift {
            coeffs: f.little_endian(),
        }
    }

    /// Little-endian coefficients `(c_0, c_1, ...)`.
    pub fn from_coeffs(coeffs: &[FqElem]) -> Self {
        let mut coeffs: Vec<u64> = coeffs.iter().map(|c| c.index()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Shift { coeffs }
    }

    pub fn degree(&self) -> Option<u32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() as u32 - 1)
        }
    }

    /// Renders with the polynomial grammar ("0" for the zero shift).
    pub fn display(&self, _ctx: &FieldCtx) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (j, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "T".to_string(),
                (1, c) => format!("{c}*T"),
                (j, 1) => format!("T^{j}"),
                (j, c) => format!("{c}*T^{j}"),
            });
        }
        terms.join(" + ")
    }

    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Shift::zero());
        }
        if let Ok(c) = s.parse::<u64>() {
            return Ok(Shift::constant(ctx.try_elem(c)?));
        }
        // reuse the monic grammar, then absorb an optional leading coefficient
        // by accepting "c*T^k" sums directly
        let mut coeffs: Vec<u64> = Vec::new();
        for raw in s.split('+') {
            let term = raw.trim();
            let (coeff_str, power) = if let Some(pos) = term.find("T^") {
                (term[..pos].trim().trim_end_matches('*').trim(), term[pos + 2..].trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?)
            } else if let Some(rest) = term.strip_suffix('T') {
                (rest.trim().trim_end_matches('*').trim(), 1)
            } else {
                (term, 0)
            };
            let c: u64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            ctx.try_elem(c)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            if coeffs[power] != 0 {
                return Err(Error::Parse(format!("duplicate power T^{power} in {s:?}")));
            }
            coeffs[power] = c;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Shift { coeffs })
    }
}

/// A tuple of pairwise distinct shifts over one field context.
pub struct ShiftTuple {
    ctx: Arc<FieldCtx>,
    shifts: Vec<Shift>,
}

impl ShiftTuple {
    pub fn new(ctx: Arc<FieldCtx>, shifts: Vec<Shift>) -> Result<Self> {
        for (i, a) in shifts.iter().enumerate() {
            for b in &shifts[..i] {
                if a == b {
                    return Err(Error::InvalidShifts(format!(
                        "shifts must be pairwise distinct, {} repeats",
                        a.display(&ctx)
                    )));
                }
            }
        }
        Ok(ShiftTuple { ctx, shifts })
    }

    /// The pair `(0, h)` for a nonzero scalar `h`.
    pub fn scalar_pair(ctx: Arc<FieldCtx>, h: FqElem) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        ShiftTuple::new(ctx, vec![Shift::zero(), Shift::constant(h)])
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn shifts(&self) -> &[Shift] {
        &self.shifts
    }
}

/// Canonical index of `f + h` for the polynomial with index `i`: shift digit
/// `j` of the base-`q` index by the `j`-th coefficient of `h`.
fn shifted_index(ctx: &FieldCtx, i: u64, shift: &Shift) -> u64 {
    let q = ctx.q();
    let mut out = i;
    let mut pos = 1u64;
    for &c in &shift.coeffs {
        if c != 0 {
            let digit = (out / pos) % q;
            let new = ctx.add(FqElem(digit), FqElem(c)).index();
            out = out - digit * pos + new * pos;
        }
        pos *= q;
    }
    out
}

/// `pi(d, q; h)`: exact count of monic degree-`d` polynomials `f` with every
/// `f + h_i` irreducible, by a single pass over the bitmap.
pub fn count_tuple(t: &ShiftTuple, d: u32) -> Result<u64> {
    for s in &t.shifts {
        if s.degree().is_some_and(|deg| deg >= d) {
            return Err(Error::InvalidShifts(format!(
                "shift {} has degree >= {d}",
                s.display(&t.ctx)
            )));
        }
    }
    let bitmap = irreducible_bitmap(&t.ctx, d)?;
    let mut count = 0u64;
    for i in 0..bitmap.len() {
        if t.shifts
            .iter()
            .all(|s| bitmap.get(shifted_index(&t.ctx, i, s)))
        {
            count += 1;
        }
    }
    Ok(count)
}

/// `pi(d, q; (0, h))` for every nonzero scalar `h` in one bitmap pass.
/// Entry `h - 1` of the result corresponds to the element with index `h`.
pub fn count_all_scalar_shifts(ctx: &Arc<FieldCtx>, d: u32) -> Result<Vec<u64>> {
    let bitmap = irreducible_bitmap(ctx, d)?;
    let q = ctx.q();
    let mut counts = vec![0u64; q as usize - 1];
    for i in 0..bitmap.len() {
        if !bitmap.get(i) {
            continue;
        }
        let base = i - i % q;
        let c0 = FqElem(i % q);
        for h in 1..q {
            let j = base + ctx.add(c0, FqElem(h)).index();
            if bitmap.get(j) {
                counts[h as usize - 1] += 1;
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::poly::enumerate_monic;

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(2), -1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn gauss_count_values() {
        for q in [2u64, 3, 4, 5, 9] {
            assert_eq!(gauss_count(q, 1), q as u128);
        }
        assert_eq!(gauss_count(2, 2), 1);
        assert_eq!(gauss_count(3, 3), 8);
    }

    #[test]
    fn gauss_count_matches_enumeration() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let ctx = make_field(p, e).unwrap();
            ctx.ensure_mul_table();
            let q = ctx.q();
            for d in 1..=6u32 {
                if (q as u128).pow(d) > 1 << 16 {
                    break;
                }
                let n = enumerate_monic(&ctx, d).filter(|f| f.is_irreducible()).count();
                assert_eq!(n as u128, gauss_count(q, d), "q={q} d={d}");
            }
        }
    }

    #[test]
    #[ignore = "full q <= 16, d <= 6 sweep; minutes of runtime"]
    fn gauss_count_matches_enumeration_full() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            for d in 1..=6u32 {
                let n = enumerate_monic(&ctx, d).filter(|f| f.is_irreducible()).count();
                assert_eq!(n as u128, gauss_count(q, d), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn bitmap_structure() {
        let f2 = make_field(2, 1).unwrap();
        // degree 1: all bits set
        let b = irreducible_bitmap(&f2, 1).unwrap();
        assert_eq!(b.count_ones(), 2);
        // (F_2, 2): exactly one irreducible quadratic
        let b = irreducible_bitmap(&f2, 2).unwrap();
        assert_eq!(b.count_ones(), 1);
        assert!(b.get(3)); // T^2 + T + 1 has digits (1, 1)
    }

    #[test]
    fn bitmap_popcount_matches_gauss() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            let ctx = make_field(p, e).unwrap();
            for d in 1..=3u32 {
                let b = irreducible_bitmap(&ctx, d).unwrap();
                assert_eq!(b.count_ones() as u128, gauss_count(ctx.q(), d));
            }
        }
    }

    #[test]
    fn bitmap_agrees_with_per_poly_test() {
        for (p, e, d) in [(5, 1, 3), (2, 2, 3), (3, 2, 2), (7, 1, 2)] {
            let ctx = make_field(p, e).unwrap();
            let b = irreducible_bitmap(&ctx, d).unwrap();
            for f in enumerate_monic(&ctx, d) {
                assert_eq!(b.get(f.index()), f.is_irreducible_generic(), "f = {f}");
            }
        }
    }

    #[test]
    fn count_tuple_examples() {
        let f5 = make_field(5, 1).unwrap();
        let t = ShiftTuple::scalar_pair(f5.clone(), f5.one()).unwrap();
        assert_eq!(count_tuple(&t, 1).unwrap(), 5);
        let f3 = make_field(3, 1).unwrap();
        let t = ShiftTuple::scalar_pair(f3.clone(), f3.one()).unwrap();
        assert_eq!(count_tuple(&t, 3).unwrap(), 1);
        let f2 = make_field(2, 1).unwrap();
        let t = ShiftTuple::scalar_pair(f2.clone(), f2.one()).unwrap();
        assert_eq!(count_tuple(&t, 3).unwrap(), 0);
    }

    #[test]
    fn all_scalar_shifts() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(count_all_scalar_shifts(&f5, 3).unwrap(), vec![10, 10, 10, 10]);
        let f7 = make_field(7, 1).unwrap();
        let counts = count_all_scalar_shifts(&f7, 3).unwrap();
        assert_eq!(counts, vec![21, 35, 28, 28, 35, 21]);
        assert_eq!(counts.iter().sum::<u64>(), 168);
    }

    #[test]
    fn all_scalar_shifts_match_count_tuple() {
        for (p, e, d) in [(7, 1, 3), (3, 2, 2), (2, 2, 3)] {
            let ctx = make_field(p, e).unwrap();
            let counts = count_all_scalar_shifts(&ctx, d).unwrap();
            for h in 1..ctx.q() {
                let t = ShiftTuple::scalar_pair(ctx.clone(), ctx.elem(h)).unwrap();
                assert_eq!(count_tuple(&t, d).unwrap(), counts[h as usize - 1]);
            }
        }
    }

    #[test]
    fn translation_invariance() {
        // shifting every entry of the tuple by a common constant preserves counts
        let mut rng = 0xdeadbeefu64;
        for (p, e, d) in [(2, 1, 3), (3, 1, 3), (5, 1, 2), (7, 1, 2), (2, 2, 2), (3, 2, 2), (3, 1, 2), (2, 3, 3)] {
            let ctx = make_field(p, e).unwrap();
            let base = ShiftTuple::scalar_pair(ctx.clone(), ctx.one()).unwrap();
            let reference = count_tuple(&base, d).unwrap();
            for _ in 0..3 {
                rng ^= rng << 13;
                rng ^= rng >> 7;
                rng ^= rng << 17;
                let c = ctx.elem(rng % ctx.q());
                let translated = ShiftTuple::new(
                    ctx.clone(),
                    vec![
                        Shift::constant(c),
                        Shift::constant(ctx.add(ctx.one(), c)),
                    ],
                )
                .unwrap();
                assert_eq!(count_tuple(&translated, d).unwrap(), reference);
            }
        }
    }

    #[test]
    fn polynomial_shifts_count() {
        // a 3-tuple with a degree-1 shift exercises the general digit shift
        let f3 = make_field(3, 1).unwrap();
        let t = ShiftTuple::new(
            f3.clone(),
            vec![
                Shift::zero(),
                Shift::constant(f3.one()),
                Shift::parse(&f3, "T").unwrap(),
            ],
        )
        .unwrap();
        let got = count_tuple(&t, 2).unwrap();
        // independent slow count: f, f + 1, f + T all irreducible
        let mut expect = 0;
        for f in enumerate_monic(&f3, 2) {
            let c = f.coeffs();
            let f_plus_t = MonicPoly::new(f3.clone(), &[f3.add(c[0], f3.one()), c[1]]);
            if f.is_irreducible() && f.add_const(f3.one()).is_irreducible() && f_plus_t.is_irreducible() {
                expect += 1;
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn cube_class_invariance() {
        for (p, e) in [(2, 2), (7, 1), (13, 1)] {
            let ctx = make_field(p, e).unwrap();
            let counts = count_all_scalar_shifts(&ctx, 3).unwrap();
            for h1 in 1..ctx.q() {
                for h2 in 1..ctx.q() {
                    let same_class = ctx.cube_class(ctx.elem(h1)).unwrap()
                        == ctx.cube_class(ctx.elem(h2)).unwrap();
                    if same_class {
                        assert_eq!(counts[h1 as usize - 1], counts[h2 as usize - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn partitioned_build_is_deterministic() {
        for (p, e, d) in [(5, 1, 3), (2, 2, 3), (3, 1, 4), (7, 1, 2)] {
            let ctx = make_field(p, e).unwrap();
            let serial = irreducible_bitmap(&ctx, d).unwrap();
            for parts in [2, 3, 7] {
                let par = irreducible_bitmap_partitioned(&ctx, d, parts).unwrap();
                assert!(serial == par, "q={} d={d} parts={parts}", ctx.q());
            }
        }
    }

    #[test]
    fn shift_validation() {
        let f3 = make_field(3, 1).unwrap();
        assert!(ShiftTuple::new(f3.clone(), vec![Shift::zero(), Shift::zero()]).is_err());
        assert!(ShiftTuple::scalar_pair(f3.clone(), f3.zero()).is_err());
        let t = ShiftTuple::new(f3.clone(), vec![Shift::zero(), Shift::parse(&f3, "T^2").unwrap()]).unwrap();
        assert!(count_tuple(&t, 2).is_err());
    }

    #[test]
    fn size_bound_enforced() {
        let f13 = make_field(13, 1).unwrap();
        assert!(matches!(
            irreducible_bitmap(&f13, 8),
            Err(Error::SizeBound { .. })
        ));
    }
}
