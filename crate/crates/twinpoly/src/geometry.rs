//! Independent fixed-point oracles for the twisted parametrizing varieties.
//!
//! Everything here counts points of finite sets inside explicitly
//! constructed extension fields, never through cohomology: `F_{q^2}` hosts
//! the square root of -1, the cube roots of unity and the `Gamma_n` sets;
//! `F_{p^{6e}}` hosts the fibers of the `H_n` covers. Special elements are
//! located by deterministic root-finding, and which root is picked never
//! affects a fixed-point count (the computations are set-level).
//!
//! The twisted Frobenius `tau F` acts through explicit coordinate maps:
//! on the degree-2 divisor by `(a, b, z) -> (-a^q, -b^q, z^q)` up to
//! projective scaling, on the base `P^1 x P^1` by
//! `(lambda, mu) -> (1/(1 - lambda^q), mu^q)`, and on the covers by
//! `(xi, lambda, mu) -> (xi^q / (lambda^q - 1), 1/(1 - lambda^q), mu^q)`.

use std::sync::Arc;

use crate::field::{cached_field, embed, FieldCtx, FqElem, PrimePower, DEFAULT_SIZE_BOUND};
use crate::poly::minimal_polynomial;
use crate::{polyvec, Error, Result};

/// Variety membership tag for a [`TwistedPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyTag {
    /// The six (three in characteristic 2) removed points on the conic
    /// `z^2 + ab = 0` in the degree-2 picture.
    Divisor,
    /// A point of `Gamma_n`: `(lambda, mu)` lying on exactly `n` graphs of
    /// the projective `S_3` action.
    Gamma(u8),
    /// A point of `H_n`: `(xi, lambda, mu)` on the cubic cover above
    /// `Gamma_n`.
    H(u8),
}

/// A point with coordinates in a designated extension field, validated
/// against the defining equations of its tagged variety at construction.
#[derive(Debug, Clone)]
pub struct TwistedPoint {
    pub coords: Vec<FqElem>,
    pub tag: VarietyTag,
}

impl TwistedPoint {
    /// A divisor point `[a : b : z]`: must satisfy the conic equation
    /// `z^2 + ab = 0` and lie on the removed locus `(a-b)(a+b)z = 0`.
    pub fn divisor(ctx: &FieldCtx, a: FqElem, b: FqElem, z: FqElem) -> Self {
        assert!(
            ctx.add(ctx.mul(z, z), ctx.mul(a, b)).is_zero(),
            "divisor point must lie on the conic"
        );
        let removed = ctx.mul(
            ctx.mul(ctx.sub(a, b), ctx.add(a, b)),
            z,
        );
        assert!(removed.is_zero(), "divisor point must lie on the removed locus");
        TwistedPoint {
            coords: vec![a, b, z],
            tag: VarietyTag::Divisor,
        }
    }

    /// A `Gamma_n` point `(lambda, mu)`: exactly `n` of the six projective
    /// transformations must map `lambda` to `mu`.
    pub fn gamma(ctx: &FieldCtx, lambda: FqElem, mu: FqElem, n: u8) -> Self {
        assert_eq!(
            stabilizer_count(ctx, lambda, mu),
            n as usize,
            "gamma point must lie on exactly n graphs"
        );
        TwistedPoint {
            coords: vec![lambda, mu],
            tag: VarietyTag::Gamma(n),
        }
    }

    /// An `H_n` point `(xi, lambda, mu)` over the twist parameter `h`:
    /// must satisfy `h xi^3 = lambda(lambda - 1) mu(1 - mu)` and lie over a
    /// `Gamma_n` base point.
    pub fn h_cover(ctx: &FieldCtx, xi: FqElem, lambda: FqElem, mu: FqElem, h: FqElem, n: u8) -> Self {
        let lhs = ctx.mul(h, ctx.mul(xi, ctx.mul(xi, xi)));
        assert_eq!(lhs, fiber_rhs(ctx, lambda, mu), "cover equation must hold");
        assert_eq!(stabilizer_count(ctx, lambda, mu), n as usize);
        TwistedPoint {
            coords: vec![xi, lambda, mu],
            tag: VarietyTag::H(n),
        }
    }
}

/// `lambda (lambda - 1) mu (1 - mu)`.
fn fiber_rhs(ctx: &FieldCtx, lambda: FqElem, mu: FqElem) -> FqElem {
    let one = ctx.one();
    ctx.mul(
        ctx.mul(lambda, ctx.sub(lambda, one)),
        ctx.mul(mu, ctx.sub(one, mu)),
    )
}

/// Number of projective transformations sigma (images of the permutation
/// action on {0, 1, oo}) with sigma(lambda) = mu; neither coordinate may be
/// 0, 1, or a pole of one of the maps here.
fn stabilizer_count(ctx: &FieldCtx, lambda: FqElem, mu: FqElem) -> usize {
    let one = ctx.one();
    let inv = |x: FqElem| ctx.inv(x).expect("coordinate away from 0, 1, infinity");
    let images = [
        lambda,                                        // identity
        ctx.sub(one, lambda),                          // 1 - l
        inv(lambda),                                   // 1/l
        ctx.mul(lambda, inv(ctx.sub(lambda, one))),    // l/(l-1)
        inv(ctx.sub(one, lambda)),                     // 1/(1-l)
        ctx.mul(ctx.sub(lambda, one), inv(lambda)),    // (l-1)/l
    ];
    images.iter().filter(|&&im| im == mu).count()
}

/// Count of pairs `(x, y)` in `F_{q^d}` whose minimal polynomials `f, g`
/// are irreducible of degree exactly `d` with `g = f + 1`; equals
/// `d^2 * pi(d, q; (0,1))` and is returned via the root count `d * A`.
pub fn twisted_pair_count(q: u64, d: u32) -> Result<u64> {
    assert!(d == 2 || d == 3, "degree must be 2 or 3");
    let pp = PrimePower::factor(q)?;
    if (q as u128).pow(d) > DEFAULT_SIZE_BOUND as u128 {
        return Err(Error::SizeBound {
            needed: (q as u128).pow(d),
            bound: DEFAULT_SIZE_BOUND as u128,
        });
    }
    let small = cached_field(pp.p(), pp.e())?;
    let big = cached_field(pp.p(), pp.e() * d)?;
    let emb = embed(&small, &big)?;
    let mut degree_d_roots = 0u64;
    for x in big.enumerate() {
        let (k, f) = minimal_polynomial(&emb, x)?;
        if k == d && f.add_const(small.one()).is_irreducible() {
            degree_d_roots += 1;
        }
    }
    Ok(d as u64 * degree_d_roots)
}

/// Number of `tau F`-fixed points among the removed divisor points of the
/// degree-2 picture, with coordinates in `F_{q^2}`.
///
/// In characteristic 2 the three rational points `[0:1:0]`, `[1:0:0]`,
/// `[1:1:1]` are all fixed. Otherwise the six points are `[0:1:0]`,
/// `[1:0:0]`, `[1:1:i]`, `[-1:-1:i]`, `[1:-1:1]`, `[-1:1:1]` with `i` a
/// square root of -1 found by search in `F_{q^2}`.
pub fn d2_divisor_fixed(q: u64) -> Result<u64> {
    let pp = PrimePower::factor(q)?;
    let big = cached_field(pp.p(), 2 * pp.e())?;
    let one = big.one();
    let zero = big.zero();
    let neg1 = big.neg(one);
    let points: Vec<TwistedPoint> = if pp.p() == 2 {
        vec![
            TwistedPoint::divisor(&big, zero, one, zero),
            TwistedPoint::divisor(&big, one, zero, zero),
            TwistedPoint::divisor(&big, one, one, one),
        ]
    } else {
        // i^2 = -1; smallest root index first
        let i_roots = polyvec::roots(&big, &[1, 0, 1]);
        let i = big.elem(i_roots[0]);
        vec![
            TwistedPoint::divisor(&big, zero, one, zero),
            TwistedPoint::divisor(&big, one, zero, zero),
            TwistedPoint::divisor(&big, one, one, i),
            TwistedPoint::divisor(&big, neg1, neg1, i),
            TwistedPoint::divisor(&big, one, neg1, one),
            TwistedPoint::divisor(&big, neg1, one, one),
        ]
    };
    let frob = |x: FqElem| big.pow(x, q);
    let mut fixed = 0;
    for pt in &points {
        let (a, b, z) = (pt.coords[0], pt.coords[1], pt.coords[2]);
        let image = [big.neg(frob(a)), big.neg(frob(b)), frob(z)];
        if projectively_equal(&big, &[a, b, z], &image) {
            fixed += 1;
        }
    }
    Ok(fixed)
}

/// Projective equality by cross-multiplication of coordinate pairs, with no
/// normalization at zero coordinates.
fn projectively_equal(ctx: &FieldCtx, p: &[FqElem], r: &[FqElem]) -> bool {
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if ctx.mul(p[i], r[j]) != ctx.mul(p[j], r[i]) {
                return false;
            }
        }
    }
    true
}

/// Shared setup for the `Gamma_n` and `H_n` counts over one `q`.
struct ExtensionScene {
    big: Arc<FieldCtx>,
    q: u64,
}

impl ExtensionScene {
    fn new(p: u64, e_small: u32, degree_over_q: u32) -> Result<Self> {
        let e_big = e_small * degree_over_q;
        if (p as u128).pow(e_big) > DEFAULT_SIZE_BOUND as u128 {
            return Err(Error::SizeBound {
                needed: (p as u128).pow(e_big),
                bound: DEFAULT_SIZE_BOUND as u128,
            });
        }
        let big = cached_field(p, e_big)?;
        Ok(ExtensionScene {
            q: p.pow(e_small),
            big,
        })
    }

    /// `{-zeta_3, -zeta_3^2}`, sorted; requires p != 3.
    fn minus_cube_roots(&self) -> Vec<FqElem> {
        let mut out: Vec<FqElem> = polyvec::roots(&self.big, &[1, 1, 1])
            .into_iter()
            .map(|r| self.big.neg(self.big.elem(r)))
            .collect();
        assert_eq!(out.len(), 2, "zeta_3 must live in a quadratic extension");
        out.sort_unstable();
        out
    }

    /// `{-1, 1/2, 2}`; requires p not in {2, 3}.
    fn involution_fixed_values(&self) -> Vec<FqElem> {
        let big = &self.big;
        let two = big.from_int(2);
        vec![big.neg(big.one()), big.inv(two).unwrap(), two]
    }

    /// `tau F` on the base: `(lambda, mu) -> (1/(1 - lambda^q), mu^q)`.
    fn base_map(&self, lambda: FqElem, mu: FqElem) -> (FqElem, FqElem) {
        let big = &self.big;
        let lq = big.pow(lambda, self.q);
        let l_new = big
            .inv(big.sub(big.one(), lq))
            .expect("lambda^q never equals 1 on these sets");
        (l_new, big.pow(mu, self.q))
    }

    /// `tau F` on the cover: the first coordinate picks up `1/(lambda^q - 1)`.
    fn cover_map(&self, xi: FqElem, lambda: FqElem, mu: FqElem) -> (FqElem, FqElem, FqElem) {
        let big = &self.big;
        let lq = big.pow(lambda, self.q);
        let xi_new = big.mul(
            big.pow(xi, self.q),
            big.inv(big.sub(lq, big.one())).unwrap(),
        );
        let (l_new, m_new) = self.base_map(lambda, mu);
        (xi_new, l_new, m_new)
    }
}

/// Number of `tau F`-fixed points of `Gamma_n` (n in {2, 3, 6}; the other
/// `Gamma_n` are empty), enumerated in `F_{q^2}`.
pub fn gamma_fixed(q: u64, n: u8) -> Result<u64> {
    assert!(n >= 2, "Gamma_n is a finite point set only for n >= 2");
    let pp = PrimePower::factor(q)?;
    let scene = ExtensionScene::new(pp.p(), pp.e(), 2)?;
    let pairs: Vec<TwistedPoint> = gamma_points(&scene, pp.p(), n);
    let fixed = pairs
        .iter()
        .filter(|pt| {
            let (l, m) = (pt.coords[0], pt.coords[1]);
            scene.base_map(l, m) == (l, m)
        })
        .count();
    Ok(fixed as u64)
}

fn gamma_points(scene: &ExtensionScene, p: u64, n: u8) -> Vec<TwistedPoint> {
    let big = &scene.big;
    let values: Vec<FqElem> = match n {
        2 if p != 2 && p != 3 => scene.involution_fixed_values(),
        3 if p != 3 => scene.minus_cube_roots(),
        6 if p == 3 => vec![big.neg(big.one())],
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for &l in &values {
        for &m in &values {
            out.push(TwistedPoint::gamma(big, l, m, n));
        }
    }
    out
}

/// Number of `tau F`-fixed points of the cover `H_{n,h}` (n in {2, 3}),
/// enumerated in `F_{p^{6e}}`: 12 points over `Gamma_3` (fibers of
/// `h xi^3 = -1`), 27 points over `Gamma_2` (empty in characteristic 2).
pub fn h_n_fixed(q: u64, h_index: u64, n: u8) -> Result<u64> {
    assert!(n == 2 || n == 3, "only the covers over Gamma_2 and Gamma_3 are finite");
    let pp = PrimePower::factor(q)?;
    if pp.p() == 3 {
        return Err(Error::CharacteristicThree);
    }
    let small = cached_field(pp.p(), pp.e())?;
    let h_small = small.try_elem(h_index)?;
    if h_small.is_zero() {
        return Err(Error::ZeroElement);
    }
    if n == 2 && pp.p() == 2 {
        return Ok(0); // Gamma_2 is empty in characteristic 2
    }
    let scene = ExtensionScene::new(pp.p(), pp.e(), 6)?;
    let emb = embed(&small, &scene.big)?;
    let h = emb.apply(h_small);
    let base: Vec<FqElem> = if n == 3 {
        scene.minus_cube_roots()
    } else {
        scene.involution_fixed_values()
    };
    let big = &scene.big;
    let h_inv = big.inv(h).unwrap();
    let mut points = Vec::new();
    for &l in &base {
        for &m in &base {
            // fiber: xi^3 = lambda(lambda-1) mu(1-mu) / h
            let rhs = big.mul(fiber_rhs(big, l, m), h_inv);
            let cubic = [big.neg(rhs).index(), 0, 0, 1];
            let roots = polyvec::roots(big, &cubic);
            assert_eq!(roots.len(), 3, "fiber values are cubes in F_{{q^6}}");
            for r in roots {
                points.push(TwistedPoint::h_cover(big, big.elem(r), l, m, h, n));
            }
        }
    }
    debug_assert_eq!(points.len(), if n == 3 { 12 } else { 27 });
    let fixed = points
        .iter()
        .filter(|pt| {
            let (xi, l, m) = (pt.coords[0], pt.coords[1], pt.coords[2]);
            scene.cover_map(xi, l, m) == (xi, l, m)
        })
        .count();
    Ok(fixed as u64)
}

/// The integer trace of the twisted Frobenius on the parametrizing variety:
/// `q^3 + q a^2 - q^2 (2 + chi) - 2q` away from characteristic 3 (with
/// `chi = 1` for `q = 1 mod 3`, else `-1`), and `q(q^2 - q - 3)` for
/// powers of 3. Always equals `9 * pi3(q)`.
pub fn trace_u(q: u64) -> Result<i128> {
    let pp = PrimePower::factor(q)?;
    let qi = q as i128;
    if pp.p() == 3 {
        return Ok(qi * (qi * qi - qi - 3));
    }
    let ctx = cached_field(pp.p(), pp.e())?;
    let a = crate::curve::trace_a(&ctx, ctx.one())? as i128;
    let chi: i128 = if qi % 3 == 1 { 1 } else { -1 };
    Ok(qi * qi * qi + qi * a * a - qi * qi * (2 + chi) - 2 * qi)
}
