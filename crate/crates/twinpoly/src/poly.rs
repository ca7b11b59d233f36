//! Monic polynomials over a field context: evaluation, enumeration,
//! irreducibility, and minimal polynomials of extension-field elements.
//!
//! A degree-`d` monic polynomial `T^d + a_1 T^{d-1} + ... + a_d` is stored as
//! the coefficient vector `(a_1, ..., a_d)` of element indices. Its canonical
//! index is the base-`q` integer with digits `(a_1, ..., a_d)`, constant term
//! least significant, so adding a constant to `f` only moves the lowest
//! digit. Polynomials render as `"T^3 + 2*T + 1"` with coefficients printed
//! as canonical element indices; parsing accepts the same grammar.

use std::fmt;
use std::sync::Arc;

use crate::field::{Embedding, FieldCtx, FqElem};
use crate::{polyvec, Error, Result};

/// A monic polynomial of degree >= 1 over a fixed field context.
#[derive(Clone)]
pub struct MonicPoly {
    ctx: Arc<FieldCtx>,
    /// `(a_1, ..., a_d)` as element indices; `a_d` is the constant term.
    coeffs: Vec<u64>,
}

impl PartialEq for MonicPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.coeffs == other.coeffs
    }
}
impl Eq for MonicPoly {}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonicPoly({self} over {:?})", self.ctx)
    }
}

impl MonicPoly {
    pub fn new(ctx: Arc<FieldCtx>, coeffs: &[FqElem]) -> Self {
        assert!(!coeffs.is_empty(), "degree must be at least 1");
        let q = ctx.q();
        let coeffs = coeffs
            .iter()
            .map(|c| {
                assert!(c.index() < q);
                c.index()
            })
            .collect();
        MonicPoly { ctx, coeffs }
    }

    /// The polynomial with canonical index `idx` among monic degree-`d` ones.
    pub fn from_index(ctx: Arc<FieldCtx>, d: u32, idx: u64) -> Self {
        let q = ctx.q();
        let mut coeffs = vec![0u64; d as usize];
        let mut rest = idx;
        for c in coeffs.iter_mut().rev() {
            *c = rest % q;
            rest /= q;
        }
        assert_eq!(rest, 0, "index out of range for degree {d}");
        MonicPoly { ctx, coeffs }
    }

    pub fn index(&self) -> u64 {
        let q = self.ctx.q();
        self.coeffs.iter().fold(0, |acc, &c| acc * q + c)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// Coefficients `(a_1, ..., a_d)`, leading term excluded.
    pub fn coeffs(&self) -> Vec<FqElem> {
        self.coeffs.iter().map(|&c| FqElem(c)).collect()
    }

    pub fn constant_term(&self) -> FqElem {
        FqElem(*self.coeffs.last().unwrap())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FqElem) -> Result<FqElem> {
        if x.index() >= self.ctx.q() {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.ctx.one();
        for &c in &self.coeffs {
            acc = self.ctx.add(self.ctx.mul(acc, x), FqElem(c));
        }
        Ok(acc)
    }

    /// `f + c`: the constant term moves, the degree does not.
    pub fn add_const(&self, c: FqElem) -> Self {
        let mut coeffs = self.coeffs.clone();
        let last = coeffs.len() - 1;
        coeffs[last] = self.ctx.add(FqElem(coeffs[last]), c).index();
        MonicPoly {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    /// Irreducibility over `F_q`.
    ///
    /// Degrees 2 and 3 reduce to the absence of roots and are checked by
    /// exhaustive evaluation (the hot path of the census); higher degrees
    /// use the generic Frobenius-power criterion.
    pub fn is_irreducible(&self) -> bool {
        match self.coeffs.len() {
            1 => true,
            2 | 3 => !self.has_root(),
            _ => self.is_irreducible_generic(),
        }
    }

    fn has_root(&self) -> bool {
        self.ctx
            .enumerate()
            .any(|x| self.eval(x).unwrap().is_zero())
    }

    /// The generic criterion, valid for every degree; exposed so the
    /// root-free path can be cross-checked against it.
    pub fn is_irreducible_generic(&self) -> bool {
        polyvec::is_irreducible(&self.ctx, &self.little_endian())
    }

    /// Little-endian coefficient vector including the leading 1.
    pub(crate) fn little_endian(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.iter().rev().copied().collect();
        v.push(1);
        v
    }

    /// Renders and parses with the CLI grammar, e.g. `"T^3 + 2*T + 1"`.
    pub fn parse(ctx: Arc<FieldCtx>, s: &str) -> Result<Self> {
        let mut terms: Vec<(u32, u64)> = Vec::new(); // (power, coeff index)
        for raw in s.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (coeff_str, power) = if let Some(rest) = term.strip_suffix("T") {
                (rest.trim().trim_end_matches('*').trim(), 1)
            } else if let Some(pos) = term.find("T^") {
                let power: u32 = term[pos + 2..]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                (term[..pos].trim().trim_end_matches('*').trim(), power)
            } else {
                (term, 0)
            };
            let coeff: u64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            if coeff >= ctx.q() {
                return Err(Error::Parse(format!(
                    "coefficient {coeff} out of range for q = {}",
                    ctx.q()
                )));
            }
            if terms.iter().any(|&(p, _)| p == power) {
                return Err(Error::Parse(format!("duplicate power T^{power} in {s:?}")));
            }
            terms.push((power, coeff));
        }
        let d = terms.iter().map(|&(p, _)| p).max().unwrap();
        if d == 0 {
            return Err(Error::Parse("degree must be at least 1".into()));
        }
        match terms.iter().find(|&&(p, _)| p == d) {
            Some(&(_, 1)) => {}
            _ => {
                return Err(Error::Parse(format!(
                    "leading term must be monic in {s:?}"
                )))
            }
        }
        let mut coeffs = vec![0u64; d as usize];
        for (p, c) in terms {
            if p == d {
                continue;
            }
            coeffs[(d - 1 - p) as usize] = c;
        }
        Ok(MonicPoly { ctx, coeffs })
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.coeffs.len() as u32;
        if d == 1 {
            write!(f, "T")?;
        } else {
            write!(f, "T^{d}")?;
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = d - 1 - i as u32;
            match (p, c) {
                (0, c) => write!(f, " + {c}")?,
                (1, 1) => write!(f, " + T")?,
                (1, c) => write!(f, " + {c}*T")?,
                (p, 1) => write!(f, " + T^{p}")?,
                (p, c) => write!(f, " + {c}*T^{p}")?,
            }
        }
        Ok(())
    }
}

/// All `q^d` monic polynomials of degree `d` in canonical index order.
pub fn enumerate_monic(ctx: &Arc<FieldCtx>, d: u32) -> impl Iterator<Item = MonicPoly> + '_ {
    let total = (ctx.q() as u128).pow(d);
    assert!(total <= u64::MAX as u128, "degree-{d} enumeration overflows");
    let ctx = ctx.clone();
    (0..total as u64).map(move |idx| MonicPoly::from_index(ctx.clone(), d, idx))
}

/// Minimal polynomial over the small field of an element `x` of the big one.
///
/// Returns the orbit size `k` of `x` under `y -> y^q` together with
/// `prod_{i<k} (T - x^{q^i})`, an irreducible monic polynomial of degree `k`
/// with coefficients pulled back through the embedding.
pub fn minimal_polynomial(emb: &Embedding, x: FqElem) -> Result<(u32, MonicPoly)> {
    let big = emb.big();
    let small = emb.small();
    if x.index() >= big.q() {
        return Err(Error::FieldMismatch);
    }
    let mut orbit = vec![x];
    let mut y = big.frobenius(x, small.e());
    while y != x {
        orbit.push(y);
        y = big.frobenius(y, small.e());
    }
    let k = orbit.len();
    let mut f: polyvec::Poly = vec![1];
    for r in &orbit {
        f = polyvec::mul(big, &f, &[big.neg(*r).index(), 1]);
    }
    let mut coeffs = Vec::with_capacity(k);
    for i in 1..=k {
        let c = emb
            .preimage(FqElem(f[k - i]))
            .expect("orbit product has coefficients in the base field");
        coeffs.push(c);
    }
    Ok((k as u32, MonicPoly::new(small.clone(), &coeffs)))
}
