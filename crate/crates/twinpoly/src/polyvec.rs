//! Crate-internal dense polynomial arithmetic over a field context.
//!
//! Polynomials are coefficient vectors of element indices, little-endian
//! (constant term first), with no trailing zeros; the zero polynomial is the
//! empty vector. No FFT: degrees stay small at desk scale.

use std::sync::Arc;

use crate::field::{FieldCtx, FqElem};

pub(crate) type Poly = Vec<u64>;

pub(crate) fn normalize(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub(crate) fn add(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = ctx.add(FqElem(x), FqElem(y)).index();
    }
    normalize(&mut out);
    out
}

pub(crate) fn sub(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = ctx.sub(FqElem(x), FqElem(y)).index();
    }
    normalize(&mut out);
    out
}

pub(crate) fn mul(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = ctx.mul(FqElem(x), FqElem(y));
            out[i + j] = ctx.add(FqElem(out[i + j]), t).index();
        }
    }
    normalize(&mut out);
    out
}

pub(crate) fn scale(ctx: &FieldCtx, a: &[u64], c: FqElem) -> Poly {
    let mut out: Poly = a.iter().map(|&x| ctx.mul(FqElem(x), c).index()).collect();
    normalize(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
pub(crate) fn divrem(ctx: &FieldCtx, num: &[u64], den: &[u64]) -> (Poly, Poly) {
    let dd = degree(den).expect("division by zero polynomial");
    let lead_inv = ctx.inv(FqElem(den[dd])).expect("nonzero leading coefficient");
    let mut rem: Poly = num.to_vec();
    normalize(&mut rem);
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - dd];
    while rem.len() >= den.len() {
        let k = rem.len() - 1;
        let c = ctx.mul(FqElem(rem[k]), lead_inv);
        let shift = k - dd;
        quot[shift] = c.index();
        for (i, &m) in den.iter().enumerate() {
            let t = ctx.mul(c, FqElem(m));
            rem[shift + i] = ctx.sub(FqElem(rem[shift + i]), t).index();
        }
        normalize(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    normalize(&mut quot);
    (quot, rem)
}

pub(crate) fn rem(ctx: &FieldCtx, num: &[u64], den: &[u64]) -> Poly {
    divrem(ctx, num, den).1
}

pub(crate) fn mulmod(ctx: &FieldCtx, a: &[u64], b: &[u64], m: &[u64]) -> Poly {
    rem(ctx, &mul(ctx, a, b), m)
}

pub(crate) fn powmod(ctx: &FieldCtx, base: &[u64], mut n: u64, m: &[u64]) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(ctx, base, m);
    while n > 0 {
        if n & 1 == 1 {
            acc = mulmod(ctx, &acc, &b, m);
        }
        b = mulmod(ctx, &b, &b, m);
        n >>= 1;
    }
    acc
}

/// Monic gcd.
pub(crate) fn gcd(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    normalize(&mut a);
    normalize(&mut b);
    while !b.is_empty() {
        let r = rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = ctx.inv(FqElem(a[d])).unwrap();
        a = scale(ctx, &a, inv);
    }
    a
}

/// Rabin's criterion for a monic polynomial of degree >= 1:
/// `f` is irreducible iff `T^{q^d} = T (mod f)` and
/// `gcd(f, T^{q^{d/r}} - T) = 1` for every prime `r | d`.
/// The Frobenius iterates are built by repeated `q`-th powers so exponents
/// always fit in a machine word.
pub(crate) fn is_irreducible(ctx: &Arc<FieldCtx>, f: &[u64]) -> bool {
    let d = degree(f).expect("zero polynomial");
    debug_assert_eq!(f[d], 1, "monic input expected");
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = ctx.q();
    let t: Poly = vec![0, 1];
    // iterates[i] = T^{q^{i+1}} mod f
    let mut iterates = Vec::with_capacity(d);
    let mut x = t.clone();
    for _ in 0..d {
        x = powmod(ctx, &x, q, f);
        iterates.push(x.clone());
    }
    if iterates[d - 1] != t {
        return false;
    }
    for r in prime_divisors(d as u64) {
        let h = sub(ctx, &iterates[d / r as usize - 1], &t);
        if degree(&gcd(ctx, f, &h)) != Some(0) {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All distinct roots of `f` in the field, sorted by canonical index.
///
/// First reduces to the squarefree product of linear factors via
/// `gcd(f, T^q - T)`, then splits it with deterministic equal-degree
/// splitting (quadratic-residue probes for odd `p`, trace probes for
/// `p = 2`, sweeping probe elements in index order).
pub(crate) fn roots(ctx: &Arc<FieldCtx>, f: &[u64]) -> Vec<u64> {
    let mut f = f.to_vec();
    normalize(&mut f);
    let d = match degree(&f) {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let lead_inv = ctx.inv(FqElem(f[d])).unwrap();
    let f = scale(ctx, &f, lead_inv);
    let t: Poly = vec![0, 1];
    let xq = powmod(ctx, &t, ctx.q(), &f);
    let lin = gcd(ctx, &f, &sub(ctx, &xq, &t));
    let mut out = Vec::new();
    split_linear(ctx, lin, &mut out);
    out.sort_unstable();
    out
}

fn split_linear(ctx: &Arc<FieldCtx>, g: Poly, out: &mut Vec<u64>) {
    match degree(&g) {
        None | Some(0) => return,
        Some(1) => {
            // monic T + c: root is -c
            out.push(ctx.neg(FqElem(g[0])).index());
            return;
        }
        Some(_) => {}
    }
    let q = ctx.q();
    // Fixed-seed probe stream: a plain index sweep can sit inside the
    // subspace of probes that fail to separate a given root set, while a
    // scrambled deterministic sequence escapes it in a couple of tries.
    let mut state = 0x9e3779b97f4a7c15u64 ^ q;
    let mut next_probe = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % q
    };
    if ctx.p() == 2 {
        // trace probes: h_delta = sum_{i<k} (delta T)^{2^i} mod g
        loop {
            let delta = next_probe();
            if delta == 0 {
                continue;
            }
            let mut term: Poly = vec![0, delta];
            term = rem(ctx, &term, &g);
            let mut h = term.clone();
            let mut k = ctx.e();
            while k > 1 {
                term = mulmod(ctx, &term, &term, &g);
                h = add(ctx, &h, &term);
                k -= 1;
            }
            if try_split(ctx, &g, &h, out) {
                return;
            }
        }
    }
    loop {
        let delta = next_probe();
        let probe: Poly = vec![delta, 1];
        let h = powmod(ctx, &probe, (q - 1) / 2, &g);
        if try_split(ctx, &g, &sub(ctx, &h, &[1]), out) {
            return;
        }
    }
}

fn try_split(ctx: &Arc<FieldCtx>, g: &Poly, h: &Poly, out: &mut Vec<u64>) -> bool {
    let s = gcd(ctx, g, h);
    match degree(&s) {
        Some(ds) if ds > 0 && ds < degree(g).unwrap() => {
            let (qt, r) = divrem(ctx, g, &s);
            debug_assert!(r.is_empty());
            split_linear(ctx, s, out);
            split_linear(ctx, qt, out);
            true
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn divrem_reconstructs() {
        let ctx = make_field(7, 1).unwrap();
        let a = vec![3, 0, 5, 1, 2];
        let b = vec![4, 1, 6];
        let (q, r) = divrem(&ctx, &a, &b);
        let back = add(&ctx, &mul(&ctx, &q, &b), &r);
        let mut a_n = a.clone();
        normalize(&mut a_n);
        assert_eq!(back, a_n);
        assert!(degree(&r) < degree(&b));
    }

    #[test]
    fn irreducibility_small_cases() {
        let f2 = make_field(2, 1).unwrap();
        assert!(is_irreducible(&f2, &[1, 1, 1])); // T^2+T+1
        assert!(!is_irreducible(&f2, &[1, 0, 1])); // (T+1)^2
        let f3 = make_field(3, 1).unwrap();
        assert!(is_irreducible(&f3, &[1, 2, 0, 1])); // T^3 - T + 1
        let f5 = make_field(5, 1).unwrap();
        assert!(!is_irreducible(&f5, &[4, 0, 1])); // T^2 - 1
    }

    #[test]
    fn roots_are_exact_and_sorted() {
        for (p, e) in [(7, 1), (2, 4), (3, 2), (13, 1), (2, 2)] {
            let ctx = make_field(p, e).unwrap();
            // f = (T - a)(T - b) T for a few pairs, roots recovered exactly
            for a in ctx.enumerate().step_by(3) {
                for b in ctx.enumerate().step_by(5) {
                    if a == b {
                        continue;
                    }
                    let f = mul(
                        &ctx,
                        &mul(&ctx, &[ctx.neg(a).index(), 1], &[ctx.neg(b).index(), 1]),
                        &[0, 1],
                    );
                    let mut expect = vec![0, a.index(), b.index()];
                    expect.sort_unstable();
                    expect.dedup();
                    assert_eq!(roots(&ctx, &f), expect);
                }
            }
            // an irreducible quadratic has no roots
            let modulus: Vec<u64> = make_field(p, 2 * e).unwrap().modulus().to_vec();
            if e == 1 {
                let mut m = modulus;
                m.push(1);
                assert!(roots(&ctx, &m).is_empty());
            }
        }
    }
}
