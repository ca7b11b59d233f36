//! Exact arithmetic in `F_{p^e}`.
//!
//! A [`FieldCtx`] is a concrete model of `F_q`, `q = p^e`: the prime field
//! `Z/p` when `e = 1`, otherwise `F_p[x]/(m)` for the canonical modulus `m`,
//! the lexicographically smallest monic irreducible of degree `e` over `F_p`
//! (comparing coefficient tuples `(c_0, ..., c_{e-1})` as integer sequences).
//! Elements are indexed canonically by `idx = sum coeffs[i] * p^i`, so the
//! zero element has index 0 and the multiplicative identity has index 1.
//! Contexts are immutable after construction and every operation is a pure
//! function of its inputs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{polyvec, Error, Result};

/// Default bound on the number of enumerable field elements.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 25;

/// Largest extension degree supported (`2^25` elements caps `e` at 25).
pub(crate) const MAX_EXT: usize = 32;

/// A prime power `q = p^e`, with `p` verified prime at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_bound(p, e, DEFAULT_SIZE_BOUND)
    }

    pub fn with_bound(p: u64, e: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(e >= 1, "exponent must be positive");
        let q = (p as u128).checked_pow(e).filter(|&q| q <= bound as u128);
        match q {
            Some(q) => Ok(PrimePower { p, e, q: q as u64 }),
            None => Err(Error::SizeBound {
                needed: (p as u128).saturating_pow(e),
                bound: bound as u128,
            }),
        }
    }

    /// Splits `q` into `(p, e)`; errors when `q` is not a prime power.
    pub fn factor(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let mut p = q;
        for cand in 2..=q {
            if cand * cand > q {
                break;
            }
            if q % cand == 0 {
                p = cand;
                break;
            }
        }
        let mut e = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        PrimePower::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// Trial division; fine at desk scale.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of a fixed field context, stored as its canonical index.
///
/// The coefficient vector is recovered with [`FieldCtx::coeffs`]. Elements
/// carry no field tag; operations trust the caller to pair them with the
/// context that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) u64);

impl FqElem {
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A concrete model of `F_{p^e}` with canonical modulus and element indexing.
pub struct FieldCtx {
    pp: PrimePower,
    /// Modulus coefficients `c_0..c_{e-1}` of `T^e + c_{e-1} T^{e-1} + ... + c_0`
    /// over `F_p`; empty when `e = 1`.
    modulus: Vec<u64>,
    /// Optional index-level multiplication table, built on demand for small
    /// extension fields that sit in hot loops.
    mul_table: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(q = {}^{} = {})", self.pp.p, self.pp.e, self.pp.q)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.pp == other.pp && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

/// Builds the canonical field context for `q = p^e`.
///
/// Deterministic: repeated calls construct the same modulus.
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldCtx>> {
    make_field_with_bound(p, e, DEFAULT_SIZE_BOUND)
}

pub fn make_field_with_bound(p: u64, e: u32, bound: u64) -> Result<Arc<FieldCtx>> {
    let pp = PrimePower::with_bound(p, e, bound)?;
    let modulus = if e == 1 {
        Vec::new()
    } else {
        canonical_modulus(&pp)
    };
    Ok(Arc::new(FieldCtx {
        pp,
        modulus,
        mul_table: OnceLock::new(),
    }))
}

/// Process-wide cache of canonical contexts, keyed by `(p, e)`.
///
/// Construction is deterministic, so caching is observationally pure.
pub(crate) fn cached_field(p: u64, e: u32) -> Result<Arc<FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&(p, e)) {
        return Ok(ctx.clone());
    }
    let ctx = make_field(p, e)?;
    cache
        .lock()
        .unwrap()
        .entry((p, e))
        .or_insert_with(|| ctx.clone());
    Ok(ctx)
}

/// Lexicographically smallest monic irreducible of degree `e` over `F_p`.
fn canonical_modulus(pp: &PrimePower) -> Vec<u64> {
    let base = Arc::new(FieldCtx {
        pp: PrimePower {
            p: pp.p,
            e: 1,
            q: pp.p,
        },
        modulus: Vec::new(),
        mul_table: OnceLock::new(),
    });
    let (p, e) = (pp.p, pp.e as usize);
    // Lex order on (c_0, ..., c_{e-1}): c_0 is the most significant digit,
    // so candidate n has c_j = (n / p^{e-1-j}) mod p. Candidates with zero
    // constant term (n < p^{e-1}) are divisible by T; skip them.
    for n in p.pow(e as u32 - 1)..pp.q {
        let mut coeffs = vec![0u64; e + 1];
        coeffs[e] = 1;
        let mut rest = n;
        for j in (0..e).rev() {
            coeffs[j] = rest % p;
            rest /= p;
        }
        if polyvec::is_irreducible(&base, &coeffs) {
            coeffs.pop();
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl FieldCtx {
    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn p(&self) -> u64 {
        self.pp.p
    }

    pub fn e(&self) -> u32 {
        self.pp.e
    }

    pub fn q(&self) -> u64 {
        self.pp.q
    }

    /// Modulus coefficients `c_0..c_{e-1}`; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1 % self.pp.q)
    }

    /// The constant element with residue `c mod p`.
    pub fn from_int(&self, c: i64) -> FqElem {
        let p = self.pp.p as i64;
        FqElem(c.rem_euclid(p) as u64)
    }

    /// The element with canonical index `idx`; panics out of range.
    pub fn elem(&self, idx: u64) -> FqElem {
        assert!(idx < self.pp.q, "index {idx} out of range for q={}", self.pp.q);
        FqElem(idx)
    }

    pub fn try_elem(&self, idx: u64) -> Result<FqElem> {
        if idx < self.pp.q {
            Ok(FqElem(idx))
        } else {
            Err(Error::IndexRange { idx, q: self.pp.q })
        }
    }

    /// All `q` elements in canonical index order `0..q-1`.
    pub fn enumerate(&self) -> impl Iterator<Item = FqElem> {
        (0..self.pp.q).map(FqElem)
    }

    /// Coefficient vector `(coeffs[0], ..., coeffs[e-1])` of an element.
    pub fn coeffs(&self, x: FqElem) -> Vec<u64> {
        let mut out = vec![0u64; self.pp.e as usize];
        let mut rest = x.0;
        for c in out.iter_mut() {
            *c = rest % self.pp.p;
            rest /= self.pp.p;
        }
        out
    }

    /// Element from base-`p` coefficients (missing entries are zero).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        assert!(coeffs.len() <= self.pp.e as usize);
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            debug_assert!(c < self.pp.p);
            idx = idx * self.pp.p + c;
        }
        FqElem(idx)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.pp.e == 1 {
            return FqElem((a.0 + b.0) % self.pp.p);
        }
        let p = self.pp.p;
        let mut idx = 0u64;
        let mut pk = 1u64;
        let (mut x, mut y) = (a.0, b.0);
        while x != 0 || y != 0 {
            idx += ((x % p + y % p) % p) * pk;
            x /= p;
            y /= p;
            pk *= p;
        }
        FqElem(idx)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.pp.e == 1 {
            return FqElem((self.pp.p - a.0) % self.pp.p);
        }
        let p = self.pp.p;
        let mut idx = 0u64;
        let mut pk = 1u64;
        let mut x = a.0;
        while x != 0 {
            idx += ((p - x % p) % p) * pk;
            x /= p;
            pk *= p;
        }
        FqElem(idx)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.pp.e == 1 {
            return FqElem(((a.0 as u128 * b.0 as u128) % self.pp.p as u128) as u64);
        }
        if let Some(table) = self.mul_table.get() {
            return FqElem(table[(a.0 * self.pp.q + b.0) as usize] as u64);
        }
        self.mul_direct(a, b)
    }

    fn mul_direct(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.pp.p;
        let e = self.pp.e as usize;
        let mut da = [0u64; MAX_EXT];
        let mut db = [0u64; MAX_EXT];
        digits(p, a.0, &mut da[..e]);
        digits(p, b.0, &mut db[..e]);
        let mut conv = [0u64; 2 * MAX_EXT];
        for (i, &x) in da[..e].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db[..e].iter().enumerate() {
                conv[i + j] += x * y;
            }
        }
        for c in conv[..2 * e - 1].iter_mut() {
            *c %= p;
        }
        // Fold degrees >= e down using T^e = -(c_{e-1} T^{e-1} + ... + c_0).
        for k in (e..2 * e - 1).rev() {
            let c = conv[k];
            if c == 0 {
                continue;
            }
            conv[k] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                conv[k - e + i] = (conv[k - e + i] + c * (p - m)) % p;
            }
        }
        let mut idx = 0u64;
        for k in (0..e).rev() {
            idx = idx * p + conv[k];
        }
        FqElem(idx)
    }

    /// Square-and-multiply with a non-negative integer exponent.
    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.pp.q - 2))
    }

    /// `x^{p^k}`, a field automorphism; the exponent reduces mod `e`.
    pub fn frobenius(&self, x: FqElem, k: u32) -> FqElem {
        let k = k % self.pp.e;
        if k == 0 {
            return x;
        }
        self.pow(x, self.pp.p.pow(k))
    }

    /// Whether nonzero `h` lies in `(F_q^x)^3`.
    ///
    /// When `3 | q - 1` this is `h^{(q-1)/3} = 1`; otherwise cubing is a
    /// bijection and every element is a cube.
    pub fn is_cube(&self, h: FqElem) -> Result<bool> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        if (self.pp.q - 1) % 3 != 0 {
            return Ok(true);
        }
        Ok(self.pow(h, (self.pp.q - 1) / 3) == self.one())
    }

    /// Key identifying the cube class of nonzero `h`: the index of
    /// `h^{(q-1)/3}`, a cube root of unity.
    pub fn cube_class(&self, h: FqElem) -> Result<u64> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        if (self.pp.q - 1) % 3 != 0 {
            return Ok(1);
        }
        Ok(self.pow(h, (self.pp.q - 1) / 3).0)
    }

    /// Builds the index-level multiplication table (extension fields only,
    /// `q` capped so the table stays small). Idempotent and thread-safe.
    pub fn ensure_mul_table(&self) {
        if self.pp.e == 1 || self.pp.q > 2048 {
            return;
        }
        self.mul_table.get_or_init(|| {
            let q = self.pp.q;
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in a..q {
                    let v = self.mul_direct(FqElem(a), FqElem(b)).0 as u32;
                    table[(a * q + b) as usize] = v;
                    table[(b * q + a) as usize] = v;
                }
            }
            table
        });
    }
}

pub(crate) fn digits(p: u64, mut idx: u64, out: &mut [u64]) {
    for d in out.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
}

/// A ring embedding `F_{p^a} -> F_{p^b}` for `a | b`, with partial inverse.
///
/// The generator of the small field maps to the root of the small modulus
/// with minimal canonical index in the big field, so the embedding is
/// deterministic.
pub struct Embedding {
    small: Arc<FieldCtx>,
    big: Arc<FieldCtx>,
    fwd: Vec<u64>,
    inv: HashMap<u64, u64>,
}

pub fn embed(small: &Arc<FieldCtx>, big: &Arc<FieldCtx>) -> Result<Embedding> {
    if small.p() != big.p() || big.e() % small.e() != 0 {
        return Err(Error::IncompatibleEmbedding {
            small: (small.p(), small.e()),
            big: (big.p(), big.e()),
        });
    }
    let q_s = small.q();
    let mut fwd = Vec::with_capacity(q_s as usize);
    if small.e() == 1 {
        // constants embed as constants
        fwd.extend(0..q_s);
    } else {
        let mut m: Vec<u64> = small.modulus.clone();
        m.push(1);
        let roots = polyvec::roots(big, &m);
        debug_assert_eq!(roots.len(), small.e() as usize);
        let g = FqElem(roots[0]);
        let e_s = small.e() as usize;
        let mut powers = Vec::with_capacity(e_s);
        let mut acc = big.one();
        for _ in 0..e_s {
            powers.push(acc);
            acc = big.mul(acc, g);
        }
        for idx in 0..q_s {
            let coeffs = small.coeffs(FqElem(idx));
            let mut y = big.zero();
            for (c, gp) in coeffs.iter().zip(&powers) {
                y = big.add(y, big.mul(big.from_int(*c as i64), *gp));
            }
            fwd.push(y.0);
        }
    }
    let inv = fwd
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, i as u64))
        .collect();
    Ok(Embedding {
        small: small.clone(),
        big: big.clone(),
        fwd,
        inv,
    })
}

impl Embedding {
    pub fn small(&self) -> &Arc<FieldCtx> {
        &self.small
    }

    pub fn big(&self) -> &Arc<FieldCtx> {
        &self.big
    }

    pub fn apply(&self, x: FqElem) -> FqElem {
        FqElem(self.fwd[x.0 as usize])
    }

    /// Inverse on the image subfield; `None` outside it.
    pub fn preimage(&self, y: FqElem) -> Option<FqElem> {
        self.inv.get(&y.0).map(|&i| FqElem(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_no_modulus() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.q(), 7);
        assert!(f7.modulus().is_empty());
    }

    #[test]
    fn canonical_moduli() {
        // unique irreducible quadratic over F_2
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1]);
        // lexicographic scan over F_3 finds T^2 + 1
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0]);
    }

    #[test]
    fn rejects_non_prime_and_oversize() {
        assert!(matches!(make_field(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(
            make_field(2, 40),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn prime_power_factoring() {
        let pp = PrimePower::factor(27).unwrap();
        assert_eq!((pp.p(), pp.e(), pp.q()), (3, 3, 27));
        assert!(PrimePower::factor(12).is_err());
        assert!(PrimePower::factor(1).is_err());
    }

    #[test]
    fn inverse_in_f7() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.inv(f7.elem(3)).unwrap(), f7.elem(5));
        assert!(f7.inv(f7.zero()).is_err());
    }

    #[test]
    fn f4_multiplication() {
        // F_4 = F_2[x]/(x^2+x+1): x * x = x + 1
        let f4 = make_field(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]);
        assert_eq!(f4.mul(x, x), f4.from_coeffs(&[1, 1]));
    }

    #[test]
    fn lagrange_pow() {
        for (p, e) in [(5, 1), (2, 3), (3, 2)] {
            let ctx = make_field(p, e).unwrap();
            for a in ctx.enumerate().skip(1) {
                assert_eq!(ctx.pow(a, ctx.q() - 1), ctx.one());
            }
        }
    }

    #[test]
    fn frobenius_cases() {
        let f4 = make_field(2, 2).unwrap();
        let x = f4.elem(2);
        let y = f4.elem(3);
        // k=0 is the identity
        assert_eq!(f4.frobenius(x, 0), x);
        // x -> x^2 swaps the two elements outside F_2
        assert_eq!(f4.frobenius(x, 1), y);
        assert_eq!(f4.frobenius(y, 1), x);
        // prime field: any k is the identity
        let f7 = make_field(7, 1).unwrap();
        for a in f7.enumerate() {
            assert_eq!(f7.frobenius(a, 5), a);
        }
        // frobenius(., e) is the identity on F_{p^e}
        let f27 = make_field(3, 3).unwrap();
        for a in f27.enumerate() {
            assert_eq!(f27.frobenius(a, 3), a);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let ctx = make_field(3, 3).unwrap();
        let mut rng = 1u64;
        for _ in 0..200 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = ctx.elem(rng % ctx.q());
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1);
            let b = ctx.elem(rng % ctx.q());
            assert_eq!(
                ctx.frobenius(ctx.add(a, b), 1),
                ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1))
            );
            assert_eq!(
                ctx.frobenius(ctx.mul(a, b), 1),
                ctx.mul(ctx.frobenius(a, 1), ctx.frobenius(b, 1))
            );
        }
    }

    #[test]
    fn cube_predicate() {
        let f5 = make_field(5, 1).unwrap();
        for h in f5.enumerate().skip(1) {
            assert!(f5.is_cube(h).unwrap(), "gcd(3, q-1) = 1 makes cubing bijective");
        }
        let f7 = make_field(7, 1).unwrap();
        assert!(f7.is_cube(f7.elem(6)).unwrap());
        assert!(!f7.is_cube(f7.elem(3)).unwrap());
        assert!(f7.is_cube(f7.zero()).is_err());
    }

    #[test]
    fn cube_partition_counts() {
        // q = 1 mod 3: exactly (q-1)/3 cubes; otherwise all q-1 elements
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (13, 1), (2, 4), (5, 2), (2, 6)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            let cubes = ctx
                .enumerate()
                .skip(1)
                .filter(|&h| ctx.is_cube(h).unwrap())
                .count() as u64;
            if (q - 1) % 3 == 0 {
                assert_eq!(cubes, (q - 1) / 3, "q = {q}");
            } else {
                assert_eq!(cubes, q - 1, "q = {q}");
            }
        }
    }

    #[test]
    fn enumerate_order() {
        let f4 = make_field(2, 2).unwrap();
        let all: Vec<u64> = f4.enumerate().map(|x| x.index()).collect();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn field_axioms_sampled() {
        for (p, e) in [(7, 1), (2, 2), (3, 2), (2, 4), (5, 2)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            let mut rng = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                rng ^= rng << 13;
                rng ^= rng >> 7;
                rng ^= rng << 17;
                ctx.elem(rng % q)
            };
            for _ in 0..1000 {
                let (a, b, c) = (next(), next(), next());
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                assert_eq!(
                    ctx.mul(a, ctx.add(b, c)),
                    ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                );
                assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
                }
            }
        }
    }

    #[test]
    fn table_matches_direct() {
        let ctx = make_field(3, 2).unwrap();
        let mut products = Vec::new();
        for a in ctx.enumerate() {
            for b in ctx.enumerate() {
                products.push(ctx.mul(a, b));
            }
        }
        ctx.ensure_mul_table();
        let mut k = 0;
        for a in ctx.enumerate() {
            for b in ctx.enumerate() {
                assert_eq!(ctx.mul(a, b), products[k]);
                k += 1;
            }
        }
    }

    #[test]
    fn embedding_of_prime_field() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let emb = embed(&f3, &f9).unwrap();
        for c in f3.enumerate() {
            assert_eq!(emb.apply(c).index(), c.index());
        }
        assert_eq!(emb.preimage(f9.elem(5)), None);
    }

    #[test]
    fn embedding_f2_in_f4() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let emb = embed(&f2, &f4).unwrap();
        let image: Vec<u64> = f2.enumerate().map(|x| emb.apply(x).index()).collect();
        assert_eq!(image, vec![0, 1]);
    }

    #[test]
    fn embedding_f4_in_f64_image_is_frobenius_stable() {
        let f4 = make_field(2, 2).unwrap();
        let f64 = make_field(2, 6).unwrap();
        let emb = embed(&f4, &f64).unwrap();
        let image: Vec<FqElem> = f4.enumerate().map(|x| emb.apply(x)).collect();
        assert_eq!(image.len(), 4);
        // the image is the fixed field of x -> x^{2^2}
        for &y in &image {
            assert_eq!(f64.frobenius(y, 2), y);
            assert!(image.contains(&f64.frobenius(y, 2)));
        }
        for y in f64.enumerate() {
            if f64.frobenius(y, 2) == y {
                assert!(image.contains(&y));
            }
        }
    }

    #[test]
    fn embedding_respects_ring_ops() {
        for (sp, se, bp, be) in [(2, 2, 2, 4), (3, 1, 3, 3), (2, 2, 2, 6), (3, 2, 3, 4)] {
            let small = make_field(sp, se).unwrap();
            let big = make_field(bp, be).unwrap();
            let emb = embed(&small, &big).unwrap();
            for a in small.enumerate() {
                for b in small.enumerate() {
                    assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
                    assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
                }
                assert_eq!(emb.preimage(emb.apply(a)), Some(a));
            }
        }
    }

    #[test]
    fn incompatible_embeddings_rejected() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert!(embed(&f4, &f8).is_err());
        assert!(embed(&f4, &f9).is_err());
    }
}
