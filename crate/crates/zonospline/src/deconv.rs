//! Semi-discrete convolution with the box spline and its inversion.
//!
//! For a finitely supported f the convolution `P(f,y)(v) = sum_xi f(xi)
//! b(Φ,y)(v - xi)` is recovered by the vertex-sum formula
//!
//! ```text
//! f(lambda) = sum_{s in V} s^{-lambda}
//!             lim_eps (Todd_s(d) P(s,y,f))(lambda + t eps) |_{q=1}
//! ```
//!
//! where `P(s,y,f)(v) = sum_xi s^xi f(xi) b(Φ,s,y)(v - xi)` and `b(Φ,s,y)`
//! is the signed sum of translates of the subsystem box spline b(Φ(s),y0)
//! obtained by expanding the convolution factors `(s^alpha e^{iy} delta_alpha - 1)`.
//!
//! The one-sided limit is realized exactly: the alcove adjacent to lambda in
//! the direction eps is located by a midpoint, the local polynomial of
//! `P(s,y,f)` there is assembled from translated local pieces of b(Φ(s)),
//! the operator acts symbolically, and the resulting polynomial is evaluated
//! at lambda itself. On the `y = 0` path every coefficient is an exact
//! cyclotomic number, so recovery is literally exact.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arrangement::{self, Alcove};
use crate::boxspline::{self, PieceKind, PiecewiseLocalPiece};
use crate::cyclotomic::Cyc;
use crate::directions::{
    slab_bounds, zonotope_contains, DirectionList, LatticeFunction, ParameterList,
    Representation,
};
use crate::error::Error;
use crate::lp::{Problem, Rel};
use crate::poly::{Poly, Ring};
use crate::rat::{Rat, RationalVector};
use crate::series::{self, OperatorPoly};
use crate::torus::{self, TorusPoint};
use crate::Result;

/// P(f,y)(v): the semi-discrete convolution of f with b(Φ,y).
pub fn semidiscrete(
    phi: &DirectionList,
    y: &ParameterList,
    f: &LatticeFunction,
    v: &RationalVector,
) -> Result<Complex64> {
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, value) in &f.entries {
        let shifted = v.sub_int(xi);
        if !in_zonotope_slabs(phi, &shifted) {
            continue;
        }
        acc += value.to_complex64() * boxspline::eval(phi, y, &shifted)?;
    }
    Ok(acc)
}

/// Exact y = 0 semi-discrete convolution.
pub fn semidiscrete_exact(
    phi: &DirectionList,
    f: &LatticeFunction,
    v: &RationalVector,
) -> Result<crate::rat::QComplex> {
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let mut acc = crate::rat::QComplex::zero();
    for (xi, value) in &f.entries {
        let shifted = v.sub_int(xi);
        if !in_zonotope_slabs(phi, &shifted) {
            continue;
        }
        let b = boxspline::eval_exact(phi, &shifted)?;
        let term = crate::rat::QComplex::new(&value.re * &b, &value.im * &b);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Fast exact membership test against the slab description of Z(Φ).
fn in_zonotope_slabs(phi: &DirectionList, v: &RationalVector) -> bool {
    match arrangement::walls(phi) {
        Ok(walls) => walls.iter().all(|w| {
            let (lo, hi) = slab_bounds(phi, &w.normal);
            let a = v.dot_int(&w.normal);
            a >= Rat::from_integer(lo) && a <= Rat::from_integer(hi)
        }),
        Err(_) => true,
    }
}

/// Per-vertex data shared by the deconvolution paths.
struct VertexContext {
    s: TorusPoint,
    phi_s: DirectionList,
    keep: Vec<usize>,
    others: Vec<usize>,
}

fn vertex_context(phi: &DirectionList, s: &TorusPoint) -> Result<VertexContext> {
    let keep = torus::phi_s_indices(phi, s);
    let phi_s = phi.sublist(&keep)?;
    if !phi_s.spans {
        return Err(Error::NotSpanningSub);
    }
    let others = (0..phi.len()).filter(|k| !keep.contains(k)).collect();
    Ok(VertexContext { s: s.clone(), phi_s, keep, others })
}

/// Expansion of `prod_{k in others} (s^{alpha_k} e^{i y_k} delta_{alpha_k} - 1)`
/// into shifts with exact cyclotomic coefficients (y = 0) .
fn expansion_exact(phi: &DirectionList, ctx: &VertexContext) -> Vec<(Vec<i64>, Cyc)> {
    let mut terms: Vec<(Vec<i64>, Cyc)> = vec![(vec![0; phi.dim], Cyc::one())];
    for &k in &ctx.others {
        let u = torus::character(&ctx.s, &phi.vectors[k]);
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (shift, coeff) in &terms {
            // s^alpha delta_alpha part
            let shifted: Vec<i64> = shift
                .iter()
                .zip(&phi.vectors[k])
                .map(|(a, b)| a + b)
                .collect();
            next.push((shifted, coeff.mul_ref(&u)));
            // -1 part
            next.push((shift.clone(), coeff.neg_ref()));
        }
        terms = next;
    }
    terms
}

/// Same expansion with the e^{i y_k} weights, in complex doubles.
fn expansion_numeric(
    phi: &DirectionList,
    ctx: &VertexContext,
    y: &ParameterList,
) -> Vec<(Vec<i64>, Complex64)> {
    let i = Complex64::new(0.0, 1.0);
    let mut terms: Vec<(Vec<i64>, Complex64)> = vec![(vec![0; phi.dim], Complex64::new(1.0, 0.0))];
    for &k in &ctx.others {
        let u = torus::character(&ctx.s, &phi.vectors[k]).to_complex64() * (i * y.values[k]).exp();
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (shift, coeff) in &terms {
            let shifted: Vec<i64> = shift
                .iter()
                .zip(&phi.vectors[k])
                .map(|(a, b)| a + b)
                .collect();
            next.push((shifted, coeff * u));
            next.push((shift.clone(), -coeff));
        }
        terms = next;
    }
    terms
}

/// The exact local polynomial of `b(Φ,s,0)` on a Φ-alcove: the signed sum of
/// translated local pieces of the subsystem spline.
fn b_phi_s_local(
    phi: &DirectionList,
    ctx: &VertexContext,
    alcove: &Alcove,
) -> Result<Poly<Cyc>> {
    let mut out = Poly::zero(phi.dim);
    for (shift, coeff) in expansion_exact(phi, ctx) {
        let w = alcove.witness.sub_int(&shift);
        if !zonotope_contains(&ctx.phi_s, &w) {
            continue;
        }
        let sub_alcove = arrangement::alcove_of(&ctx.phi_s, &w)?;
        let piece = boxspline::local_polynomial_raw(&ctx.phi_s, &sub_alcove)?;
        if piece.is_zero() {
            continue;
        }
        let minus_shift: Vec<Rat> = shift
            .iter()
            .map(|&x| Rat::from_integer(BigInt::from(-x)))
            .collect();
        let translated = piece.shifted(&minus_shift).map_coeffs(|c| Cyc::from_rat(c.clone()));
        out = out.add(&translated.scale(&coeff));
    }
    Ok(out)
}

/// Pointwise value of `P(s,y,f)` at a regular point (exact path).
pub fn p_s_exact(
    phi: &DirectionList,
    s: &TorusPoint,
    f: &LatticeFunction,
    v: &RationalVector,
) -> Result<Cyc> {
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let ctx = vertex_context(phi, s)?;
    let expansion = expansion_exact(phi, &ctx);
    let mut acc = Cyc::zero();
    for (xi, value) in &f.entries {
        let sxi = torus::character(s, xi);
        let fval = Cyc::from_qcomplex(value);
        for (shift, coeff) in &expansion {
            let w = v.sub_int(xi).sub_int(shift);
            if !in_zonotope_slabs(&ctx.phi_s, &w) {
                continue;
            }
            let b = boxspline::eval_exact(&ctx.phi_s, &w)?;
            acc = acc.add_ref(&sxi.mul_ref(&fval).mul_ref(coeff).mul_ref(&Cyc::from_rat(b)));
        }
    }
    Ok(acc)
}

/// Pointwise value of `P(s,y,f)` for general parameters.
pub fn p_s(
    phi: &DirectionList,
    s: &TorusPoint,
    y: &ParameterList,
    f: &LatticeFunction,
    v: &RationalVector,
) -> Result<Complex64> {
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let ctx = vertex_context(phi, s)?;
    let y0 = y.sublist(&ctx.keep);
    let expansion = expansion_numeric(phi, &ctx, y);
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, value) in &f.entries {
        let sxi = torus::character(s, xi).to_complex64();
        for (shift, coeff) in &expansion {
            let w = v.sub_int(xi).sub_int(shift);
            if !in_zonotope_slabs(&ctx.phi_s, &w) {
                continue;
            }
            acc += sxi * value.to_complex64() * coeff * boxspline::eval(&ctx.phi_s, &y0, &w)?;
        }
    }
    Ok(acc)
}

type GKey = (
    (usize, Vec<Vec<i64>>),          // list
    Vec<Rat>,                        // vertex angle
    Vec<(Vec<i64>, BigInt)>,         // alcove
    Option<Vec<Rat>>,                // translation entries, if any
);
static G_CACHE: Lazy<Mutex<HashMap<GKey, Arc<Poly<Cyc>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// `G_s(c') = Todd_s applied to the local polynomial of b(Φ,s,0) on c'`,
/// cached: deconvolution values at every lattice point reuse these.
fn g_piece(
    phi: &DirectionList,
    ctx: &VertexContext,
    op: &OperatorPoly<Cyc>,
    alcove: &Alcove,
    translation: Option<&Representation>,
) -> Result<Arc<Poly<Cyc>>> {
    let key: GKey = (
        (phi.dim, phi.vectors.clone()),
        ctx.s.angle().to_vec(),
        alcove.key(),
        translation.map(|r| r.entries.clone()),
    );
    if let Some(hit) = G_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let local = b_phi_s_local(phi, ctx, alcove)?;
    let applied = Arc::new(op.apply(&local));
    G_CACHE.lock().unwrap().insert(key, applied.clone());
    Ok(applied)
}

/// Exact deconvolution at a lattice point: recovers `f(lambda)` when eps is
/// generic in the cone of Φ. Out-of-cone directions still evaluate the
/// formula (the negative controls rely on seeing the wrong value).
pub fn deconvolve_exact(
    phi: &DirectionList,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Cyc> {
    deconvolve_translated_exact_inner(phi, None, f, lambda, eps)
}

/// Exact translated deconvolution. The zonotope and tangent-cone
/// preconditions are hard errors: the underlying theorem fails outside them.
pub fn deconvolve_translated_exact(
    phi: &DirectionList,
    rrep: &Representation,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Cyc> {
    let r = rrep.point(phi);
    if !zonotope_contains(phi, &r) {
        return Err(Error::PointOutsideZonotope);
    }
    if !arrangement::is_generic(phi, eps)? {
        return Err(Error::NotGeneric);
    }
    if !crate::directions::tangent_cone_contains(phi, rrep, eps)? {
        return Err(Error::DirectionOutsideCone);
    }
    deconvolve_translated_exact_inner(phi, Some(rrep), f, lambda, eps)
}

fn deconvolve_translated_exact_inner(
    phi: &DirectionList,
    translation: Option<&Representation>,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Cyc> {
    phi.require_spans()?;
    if !arrangement::is_generic(phi, eps)? {
        return Err(Error::NotGeneric);
    }
    let order = phi.len() - phi.dim;
    let r_point = translation
        .map(|rr| rr.point(phi))
        .unwrap_or_else(|| RationalVector::zero(phi.dim));
    // the limit is taken at lambda in the r-shifted arrangement, i.e. at
    // lambda + r in the unshifted one
    let base = RationalVector::from_ints(lambda);
    let anchor = &base + &r_point;
    let limit = arrangement::limit_point(phi, &anchor, eps)?;
    let alcove = arrangement::alcove_of(phi, &limit)?;
    let mut total = Cyc::zero();
    for s in torus::vertex_set(phi)? {
        let ctx = vertex_context(phi, &s)?;
        let op = series::todd_operator_exact(phi, &s, order, translation);
        let mut vertex_sum = Cyc::zero();
        for (xi, value) in &f.entries {
            let shifted_alcove = alcove.translated(&xi.iter().map(|x| -x).collect::<Vec<_>>());
            if !alcove_meets_zonotope(phi, &shifted_alcove) {
                continue;
            }
            let g = g_piece(phi, &ctx, &op, &shifted_alcove, translation)?;
            if g.is_zero() {
                continue;
            }
            // evaluate at lambda + r - xi
            let at: Vec<Rat> = anchor
                .sub_int(xi)
                .coords;
            let val = g.eval_rat(&at);
            let sxi = torus::character(&s, xi);
            vertex_sum = vertex_sum.add_ref(&sxi.mul_ref(&Cyc::from_qcomplex(value)).mul_ref(&val));
        }
        let minus_lambda: Vec<i64> = lambda.iter().map(|x| -x).collect();
        let character = torus::character(&s, &minus_lambda);
        total = total.add_ref(&character.mul_ref(&vertex_sum));
    }
    Ok(total)
}

fn alcove_meets_zonotope(phi: &DirectionList, alcove: &Alcove) -> bool {
    in_zonotope_slabs(phi, &alcove.witness)
}

/// Deconvolution for general parameters, delegating to the exact path when
/// y = 0. Error magnitudes ride the numeric-differentiation gate.
pub fn deconvolve(
    phi: &DirectionList,
    y: &ParameterList,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Complex64> {
    if y.is_zero() {
        return Ok(deconvolve_exact(phi, f, lambda, eps)?.to_complex64());
    }
    deconvolve_numeric_inner(phi, None, y, f, lambda, eps)
}

/// Translated deconvolution for general parameters.
pub fn deconvolve_translated(
    phi: &DirectionList,
    y: &ParameterList,
    rrep: &Representation,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Complex64> {
    if y.is_zero() {
        return Ok(deconvolve_translated_exact(phi, rrep, f, lambda, eps)?.to_complex64());
    }
    let r = rrep.point(phi);
    if !zonotope_contains(phi, &r) {
        return Err(Error::PointOutsideZonotope);
    }
    if !arrangement::is_generic(phi, eps)? {
        return Err(Error::NotGeneric);
    }
    if !crate::directions::tangent_cone_contains(phi, rrep, eps)? {
        return Err(Error::DirectionOutsideCone);
    }
    deconvolve_numeric_inner(phi, Some(rrep), y, f, lambda, eps)
}

fn deconvolve_numeric_inner(
    phi: &DirectionList,
    translation: Option<&Representation>,
    y: &ParameterList,
    f: &LatticeFunction,
    lambda: &[i64],
    eps: &RationalVector,
) -> Result<Complex64> {
    phi.require_spans()?;
    if !arrangement::is_generic(phi, eps)? {
        return Err(Error::NotGeneric);
    }
    let order = series::truncation_order(phi, y)?;
    let r_point = translation
        .map(|rr| rr.point(phi))
        .unwrap_or_else(|| RationalVector::zero(phi.dim));
    let base = RationalVector::from_ints(lambda);
    let anchor = &base + &r_point;
    let limit = arrangement::limit_point(phi, &anchor, eps)?;
    let alcove = arrangement::alcove_of(phi, &limit)?;
    let phase = translation
        .map(|rr| (-Complex64::new(0.0, 1.0) * rr.pair_y(y)).exp())
        .unwrap_or_else(|| Complex64::new(1.0, 0.0));
    let mut total = Complex64::new(0.0, 0.0);
    for s in torus::vertex_set(phi)? {
        let ctx = vertex_context(phi, &s)?;
        let op = series::todd_operator_numeric(phi, &s, y, order, translation)?;
        let sampler = p_s_sampler(phi, &ctx, y, f)?;
        let piece = PiecewiseLocalPiece {
            alcove: alcove.clone(),
            kind: PieceKind::Sampler(sampler),
        };
        let value = series::apply_operator_numeric(&op, &piece, &anchor)?;
        let minus_lambda: Vec<i64> = lambda.iter().map(|x| -x).collect();
        total += torus::character(&s, &minus_lambda).to_complex64() * value * phase;
    }
    Ok(total)
}

/// A sampler of `P(s,y,f)` as a function on V, restricted in practice to one
/// alcove by the caller.
fn p_s_sampler(
    phi: &DirectionList,
    ctx: &VertexContext,
    y: &ParameterList,
    f: &LatticeFunction,
) -> Result<Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>> {
    let y0 = y.sublist(&ctx.keep);
    let expansion = expansion_numeric(phi, ctx, y);
    let entries: Vec<(Vec<i64>, Complex64, Complex64)> = f
        .entries
        .iter()
        .map(|(xi, value)| {
            let sxi = torus::character(&ctx.s, xi).to_complex64();
            (xi.clone(), value.to_complex64(), sxi)
        })
        .collect();
    let phi_s = ctx.phi_s.clone();
    let order = 16usize.max(phi.len() + 2);
    Ok(Arc::new(move |v: &[f64]| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, fval, sxi) in &entries {
            for (shift, coeff) in &expansion {
                let w: Vec<f64> = v
                    .iter()
                    .zip(xi.iter().zip(shift))
                    .map(|(x, (a, b))| x - (*a as f64) - (*b as f64))
                    .collect();
                acc += sxi * fval * coeff * boxspline::eval_numeric(&phi_s, &y0, &w, order);
            }
        }
        acc
    }))
}

/// Reconstruction from a fixed alcove: for lambda in the enlarged region
/// `(c - Z(Φ)) ∩ Λ` the analytic continuation of the local piece of
/// `P(s,y,f)` on c recovers f(lambda) at lambda itself.
pub fn reconstruct_from_alcove_exact(
    phi: &DirectionList,
    alcove: &Alcove,
    f: &LatticeFunction,
    lambda: &[i64],
) -> Result<Cyc> {
    phi.require_spans()?;
    if !lattice_point_covered(phi, alcove, lambda)? {
        return Err(Error::LatticePointNotCovered);
    }
    reconstruct_inner(phi, alcove, f, lambda)
}

fn reconstruct_inner(
    phi: &DirectionList,
    alcove: &Alcove,
    f: &LatticeFunction,
    lambda: &[i64],
) -> Result<Cyc> {
    let order = phi.len() - phi.dim;
    let base = RationalVector::from_ints(lambda);
    let mut total = Cyc::zero();
    for s in torus::vertex_set(phi)? {
        let ctx = vertex_context(phi, &s)?;
        let op = series::todd_operator_exact(phi, &s, order, None);
        let mut vertex_sum = Cyc::zero();
        for (xi, value) in &f.entries {
            let shifted_alcove = alcove.translated(&xi.iter().map(|x| -x).collect::<Vec<_>>());
            if !alcove_meets_zonotope(phi, &shifted_alcove) {
                continue;
            }
            let g = g_piece(phi, &ctx, &op, &shifted_alcove, None)?;
            if g.is_zero() {
                continue;
            }
            let at = base.sub_int(xi).coords;
            let val = g.eval_rat(&at);
            let sxi = torus::character(&s, xi);
            vertex_sum = vertex_sum.add_ref(&sxi.mul_ref(&Cyc::from_qcomplex(value)).mul_ref(&val));
        }
        let minus_lambda: Vec<i64> = lambda.iter().map(|x| -x).collect();
        total = total.add_ref(&torus::character(&s, &minus_lambda).mul_ref(&vertex_sum));
    }
    Ok(total)
}

/// True iff the open alcove meets `lambda + Z(Φ)` with nonempty interior,
/// decided by maximizing the slab margin with an exact LP.
pub fn lattice_point_covered(
    phi: &DirectionList,
    alcove: &Alcove,
    lambda: &[i64],
) -> Result<bool> {
    phi.require_spans()?;
    let d = phi.dim;
    let n = phi.len();
    // variables: v (free, d), t (n, in [0,1]), margin delta
    let vars = d + n + 1;
    let mut lp = Problem::new(vars);
    for j in 0..d {
        lp.set_free(j);
    }
    // v = lambda + sum t_k alpha_k
    for i in 0..d {
        let mut row = vec![Rat::zero(); vars];
        row[i] = Rat::one();
        for (k, alpha) in phi.vectors.iter().enumerate() {
            row[d + k] = Rat::from_integer((-alpha[i]).into());
        }
        lp.add_row(row, Rel::Eq, Rat::from_integer(lambda[i].into()));
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); vars];
        row[d + k] = Rat::one();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    // slab constraints with margin: s + delta l1 <= n . v <= s + 1 - delta l1
    for (normal, slab) in &alcove.slabs {
        let l1: i64 = normal.iter().map(|&x| x.abs()).sum();
        let mut lo = vec![Rat::zero(); vars];
        let mut hi = vec![Rat::zero(); vars];
        for (j, &c) in normal.iter().enumerate() {
            lo[j] = Rat::from_integer(c.into());
            hi[j] = Rat::from_integer(c.into());
        }
        lo[vars - 1] = Rat::from_integer((-l1).into());
        hi[vars - 1] = Rat::from_integer(l1.into());
        lp.add_row(lo, Rel::Ge, Rat::from_integer(slab.clone()));
        lp.add_row(hi, Rel::Le, Rat::from_integer(slab + BigInt::from(1)));
    }
    let mut objective = vec![Rat::zero(); vars];
    objective[vars - 1] = Rat::one();
    lp.set_objective(objective);
    match lp.solve() {
        crate::lp::Outcome::Optimal { value, .. } => Ok(value > Rat::from_integer(0.into())),
        crate::lp::Outcome::Infeasible => Ok(false),
        crate::lp::Outcome::Unbounded => Ok(true),
    }
}

/// The Dahmen-Micchelli quasipolynomial attached to an alcove, evaluated at
/// a lattice point: `Q(c)(nu) = sum_s s^{-nu} m_s(c)(nu)` with `m_s(c)` the
/// operator-applied local piece of `P(s, delta_0)` on c.
pub fn dm_quasipolynomial(
    phi: &DirectionList,
    alcove: &Alcove,
    nu: &[i64],
) -> Result<Cyc> {
    phi.require_spans()?;
    let f = LatticeFunction::delta(vec![0; phi.dim]);
    reconstruct_inner(phi, alcove, &f, nu)
}

/// Largest |coordinate| over the support of f plus the zonotope reach; the
/// window outside which deconvolution values are structurally zero. Used by
/// verification drivers.
pub fn support_reach(phi: &DirectionList, f: &LatticeFunction) -> i64 {
    let mut reach: i64 = 0;
    for xi in f.entries.keys() {
        for &x in xi {
            reach = reach.max(x.abs());
        }
    }
    let bbox = boxspline::zonotope_bbox(phi);
    let z_reach = bbox
        .iter()
        .map(|(lo, hi)| {
            let l = lo.to_i64().unwrap_or(0).abs();
            let h = hi.to_i64().unwrap_or(0).abs();
            l.max(h)
        })
        .max()
        .unwrap_or(0);
    reach + z_reach + 1
}
