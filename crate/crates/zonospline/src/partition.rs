//! Kostant partition functions with parameters, chambers of the positive
//! arrangement, the multispline T(Φ,y), and the Todd-operator formula that
//! turns local multispline pieces into partition counts.
//!
//! The semi-discrete convolution of the partition trace with the box spline
//! is the multispline. Expanding the per-vertex convolution kernels against
//! the geometric series of shifts collapses each non-invariant direction to
//! a factor of -1, so the piece entering the vertex formula at s is
//! `(-1)^{#{k : s^{alpha_k} != 1}} T(Φ(s), y_0)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::arrangement::{self, Alcove};
use crate::boxspline::{self, PieceKind, PiecewiseLocalPiece};
use crate::cyclotomic::Cyc;
use crate::directions::{DirectionList, ParameterList};
use crate::error::Error;
use crate::lp::{Outcome, Problem, Rel};
use crate::poly::{Poly, Ring};
use crate::rat::{rat, Rat, RationalVector};
use crate::series;
use crate::torus::{self, TorusPoint};
use crate::Result;

/// A chamber of the positive arrangement: the connected component of the
/// complement of all walls containing the witness. Using every wall (not
/// only facets of subset cones) refines chambers, which is safe: local
/// pieces stay polynomial on finer regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub witness: RationalVector,
    pub signs: BTreeMap<Vec<i64>, i8>,
}

impl Chamber {
    pub fn key(&self) -> Vec<(Vec<i64>, i8)> {
        self.signs.iter().map(|(n, s)| (n.clone(), *s)).collect()
    }
}

/// The chamber of a point off every cone boundary.
pub fn chamber_of(phi: &DirectionList, v: &RationalVector) -> Result<Chamber> {
    phi.require_spans()?;
    let mut signs = BTreeMap::new();
    for wall in arrangement::walls(phi)? {
        let a = v.dot_int(&wall.normal);
        if a.is_zero() {
            return Err(Error::OnConeBoundary);
        }
        signs.insert(wall.normal, if a.is_positive() { 1 } else { -1 });
    }
    Ok(Chamber { witness: v.clone(), signs })
}

/// Exact count of nonnegative integer representations `sum p_k alpha_k = nu`.
pub fn partition_count(phi: &DirectionList, nu: &[i64]) -> Result<BigInt> {
    phi.require_salient()?;
    let target: Vec<Rat> = nu.iter().map(|&x| Rat::from_integer(x.into())).collect();
    Ok(count_rec(phi, phi.len(), &target))
}

fn count_rec(phi: &DirectionList, m: usize, target: &[Rat]) -> BigInt {
    if m == 0 {
        return if target.iter().all(|c| c.is_zero()) {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    let Some(bound) = max_weight_bound(phi, m, target) else {
        return BigInt::zero();
    };
    let alpha = &phi.vectors[m - 1];
    let mut acc = BigInt::zero();
    let mut p = BigInt::zero();
    while p <= bound {
        let residual: Vec<Rat> = target
            .iter()
            .zip(alpha)
            .map(|(t, &a)| t - Rat::from_integer(&p * BigInt::from(a)))
            .collect();
        acc += count_rec(phi, m - 1, &residual);
        p += 1;
    }
    acc
}

/// LP bound on the last weight over `{ t >= 0 : sum_{j < m} t_j alpha_j +
/// t_m alpha_m = target }`; `None` when even the relaxation is infeasible.
fn max_weight_bound(phi: &DirectionList, m: usize, target: &[Rat]) -> Option<BigInt> {
    let mut lp = Problem::new(m);
    for i in 0..phi.dim {
        let row: Vec<Rat> = (0..m)
            .map(|k| Rat::from_integer(phi.vectors[k][i].into()))
            .collect();
        lp.add_row(row, Rel::Eq, target[i].clone());
    }
    let mut obj = vec![Rat::zero(); m];
    obj[m - 1] = Rat::one();
    lp.set_objective(obj);
    match lp.solve() {
        Outcome::Optimal { value, .. } => Some(value.floor().to_integer()),
        Outcome::Infeasible => None,
        Outcome::Unbounded => panic!("salient cone cannot have unbounded weights"),
    }
}

/// All solutions p of the partition equation, as weight vectors.
pub fn partition_solutions(phi: &DirectionList, nu: &[i64]) -> Result<Vec<Vec<BigInt>>> {
    phi.require_salient()?;
    let target: Vec<Rat> = nu.iter().map(|&x| Rat::from_integer(x.into())).collect();
    let mut out = Vec::new();
    let mut stack = vec![BigInt::zero(); phi.len()];
    solutions_rec(phi, phi.len(), &target, &mut stack, &mut out);
    Ok(out)
}

fn solutions_rec(
    phi: &DirectionList,
    m: usize,
    target: &[Rat],
    stack: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if m == 0 {
        if target.iter().all(|c| c.is_zero()) {
            out.push(stack.clone());
        }
        return;
    }
    let Some(bound) = max_weight_bound(phi, m, target) else {
        return;
    };
    let alpha = &phi.vectors[m - 1];
    let mut p = BigInt::zero();
    while p <= bound {
        let residual: Vec<Rat> = target
            .iter()
            .zip(alpha)
            .map(|(t, &a)| t - Rat::from_integer(&p * BigInt::from(a)))
            .collect();
        stack[m - 1] = p.clone();
        solutions_rec(phi, m - 1, &residual, stack, out);
        p += 1;
    }
    stack[m - 1] = BigInt::zero();
}

/// The weighted trace `sum_{p in P(Φ,nu)} e^{i p . y}`.
pub fn partition_trace(phi: &DirectionList, y: &ParameterList, nu: &[i64]) -> Result<Complex64> {
    let solutions = partition_solutions(phi, nu)?;
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in solutions {
        let phase: Complex64 = p
            .iter()
            .zip(&y.values)
            .map(|(pk, yk)| i * yk * pk.to_f64().unwrap_or(0.0))
            .sum();
        acc += phase.exp();
    }
    Ok(acc)
}

/// Exact multispline value T(Φ)(v) at a regular point, y = 0.
pub fn multispline_exact(phi: &DirectionList, v: &RationalVector) -> Result<Rat> {
    phi.require_salient()?;
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let mut acc = Rat::zero();
    for (_, shifted) in contributing_shifts(phi, v)? {
        acc += boxspline::eval_exact(phi, &shifted)?;
    }
    Ok(acc)
}

/// T(Φ,y)(v) for general parameters.
pub fn multispline_eval(
    phi: &DirectionList,
    y: &ParameterList,
    v: &RationalVector,
) -> Result<Complex64> {
    phi.require_salient()?;
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, shifted) in contributing_shifts(phi, v)? {
        let phase: Complex64 = p
            .iter()
            .zip(&y.values)
            .map(|(pk, yk)| i * yk * pk.to_f64().unwrap_or(0.0))
            .sum();
        acc += phase.exp() * boxspline::eval(phi, y, &shifted)?;
    }
    Ok(acc)
}

/// The finitely many weight vectors p >= 0 with `v - sum p_k alpha_k` in
/// Z(Φ), with the shifted points.
fn contributing_shifts(
    phi: &DirectionList,
    v: &RationalVector,
) -> Result<Vec<(Vec<BigInt>, RationalVector)>> {
    let mut out = Vec::new();
    let mut stack = vec![BigInt::zero(); phi.len()];
    shifts_rec(phi, phi.len(), v, &mut stack, &mut out);
    Ok(out)
}

fn shifts_rec(
    phi: &DirectionList,
    m: usize,
    v: &RationalVector,
    stack: &mut Vec<BigInt>,
    out: &mut Vec<(Vec<BigInt>, RationalVector)>,
) {
    if m == 0 {
        if crate::directions::zonotope_contains(phi, v) {
            out.push((stack.clone(), v.clone()));
        }
        return;
    }
    let Some(bound) = shift_bound(phi, m, v) else {
        return;
    };
    let alpha = &phi.vectors[m - 1];
    let mut p = BigInt::zero();
    while p <= bound {
        let residual = RationalVector::new(
            v.coords
                .iter()
                .zip(alpha)
                .map(|(c, &a)| c - Rat::from_integer(&p * BigInt::from(a)))
                .collect(),
        );
        stack[m - 1] = p.clone();
        shifts_rec(phi, m - 1, &residual, stack, out);
        p += 1;
    }
    stack[m - 1] = BigInt::zero();
}

/// LP bound for the recursion: max p_m over
/// `{ p_{1..m} >= 0, t in [0,1]^N : sum p_j alpha_j + sum t_k alpha_k = v }`.
fn shift_bound(phi: &DirectionList, m: usize, v: &RationalVector) -> Option<BigInt> {
    let n = phi.len();
    let vars = m + n;
    let mut lp = Problem::new(vars);
    for i in 0..phi.dim {
        let mut row = vec![Rat::zero(); vars];
        for k in 0..m {
            row[k] = Rat::from_integer(phi.vectors[k][i].into());
        }
        for k in 0..n {
            row[m + k] = Rat::from_integer(phi.vectors[k][i].into());
        }
        lp.add_row(row, Rel::Eq, v.coords[i].clone());
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); vars];
        row[m + k] = Rat::one();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    let mut obj = vec![Rat::zero(); vars];
    obj[m - 1] = Rat::one();
    lp.set_objective(obj);
    match lp.solve() {
        Outcome::Optimal { value, .. } => Some(value.floor().to_integer()),
        Outcome::Infeasible => None,
        Outcome::Unbounded => panic!("salient cone keeps shifts bounded"),
    }
}

/// True iff the chamber meets `nu + Z(Φ)` with nonempty interior, so the
/// closing theorem applies at nu.
pub fn chamber_covers(phi: &DirectionList, tau: &Chamber, nu: &[i64]) -> Result<bool> {
    phi.require_spans()?;
    let d = phi.dim;
    let n = phi.len();
    let vars = d + n + 1;
    let mut lp = Problem::new(vars);
    for j in 0..d {
        lp.set_free(j);
    }
    for i in 0..d {
        let mut row = vec![Rat::zero(); vars];
        row[i] = Rat::one();
        for (k, alpha) in phi.vectors.iter().enumerate() {
            row[d + k] = Rat::from_integer((-alpha[i]).into());
        }
        lp.add_row(row, Rel::Eq, Rat::from_integer(nu[i].into()));
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); vars];
        row[d + k] = Rat::one();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    for (normal, sign) in &tau.signs {
        let l1: i64 = normal.iter().map(|&x| x.abs()).sum();
        let mut row = vec![Rat::zero(); vars];
        for (j, &c) in normal.iter().enumerate() {
            row[j] = Rat::from_integer((c * *sign as i64).into());
        }
        row[vars - 1] = Rat::from_integer((-l1).into());
        lp.add_row(row, Rel::Ge, Rat::zero());
    }
    let mut obj = vec![Rat::zero(); vars];
    obj[vars - 1] = Rat::one();
    lp.set_objective(obj);
    match lp.solve() {
        Outcome::Optimal { value, .. } => Ok(value.is_positive()),
        Outcome::Infeasible => Ok(false),
        Outcome::Unbounded => Ok(true),
    }
}

type TauKey = ((usize, Vec<Vec<i64>>), Vec<Rat>, Vec<(Vec<i64>, i8)>);
static TAU_PIECE_CACHE: Lazy<Mutex<HashMap<TauKey, Arc<Poly<Cyc>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The operator-applied local piece at vertex s over the chamber tau:
/// `Todd_s` applied to `(-1)^{n_s} T(Φ(s))` restricted to tau (y = 0).
fn tau_vertex_piece(
    phi: &DirectionList,
    s: &TorusPoint,
    tau: &Chamber,
    order: usize,
) -> Result<Arc<Poly<Cyc>>> {
    let key: TauKey = ((phi.dim, phi.vectors.clone()), s.angle().to_vec(), tau.key());
    if let Some(hit) = TAU_PIECE_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let keep = torus::phi_s_indices(phi, s);
    let phi_s = phi.sublist(&keep)?;
    if !phi_s.spans {
        return Err(Error::NotSpanningSub);
    }
    let n_others = phi.len() - keep.len();
    let degree = phi_s.len() - phi_s.dim;
    let grid = chamber_grid(phi, tau, degree + 1)?;
    let raw = crate::poly::interp_tensor(&grid, |pt| {
        multispline_exact(&phi_s, &RationalVector::new(pt.to_vec()))
            .expect("grid nodes are regular and inside the chamber")
    });
    let sign = if n_others % 2 == 1 {
        Cyc::from_rat(rat(-1, 1))
    } else {
        Cyc::one()
    };
    let operand = raw.map_coeffs(|c| Cyc::from_rat(c.clone())).scale(&sign);
    let op = series::todd_operator_exact(phi, s, order, None);
    let applied = Arc::new(op.apply(&operand));
    TAU_PIECE_CACHE.lock().unwrap().insert(key, applied.clone());
    Ok(applied)
}

/// A tensor grid strictly inside the chamber whose nodes avoid all affine
/// walls: the center wanders with distinct per-axis weights (a symmetric
/// nudge would never clear walls like x - y = m) while the box shrinks.
fn chamber_grid(phi: &DirectionList, tau: &Chamber, count: usize) -> Result<Vec<Vec<Rat>>> {
    const PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];
    // scale the witness outward so integer-sized boxes fit
    let mut center = tau.witness.clone();
    let mut scale = Rat::one();
    loop {
        let h = chamber_half_width(tau, &center);
        if h >= rat(1, 2) || scale > rat(4096, 1) {
            break;
        }
        scale = scale * rat(2, 1);
        center = tau.witness.scale(&scale);
    }
    let mut h = chamber_half_width(tau, &center).min(rat(3, 2));
    for attempt in 0..400i64 {
        let base = rat(1 + (attempt % 40), 37 + 2 * attempt);
        let shifted = RationalVector::new(
            center
                .coords
                .iter()
                .enumerate()
                .map(|(j, c)| c + &h * &base * rat(PRIMES[j % PRIMES.len()], 24))
                .collect(),
        );
        if chamber_half_width(tau, &shifted) < &h * rat(1, 2) {
            h = &h * rat(9, 10);
            continue;
        }
        let grid: Vec<Vec<Rat>> = (0..phi.dim)
            .map(|j| axis_nodes(&shifted.coords[j], &(&h * rat(2, 5)), count))
            .collect();
        if grid_is_regular(phi, &grid)? {
            return Ok(grid);
        }
        h = &h * rat(19, 20);
    }
    Err(Error::SearchExhausted(400))
}

fn axis_nodes(center: &Rat, h: &Rat, count: usize) -> Vec<Rat> {
    if count == 1 {
        return vec![center.clone()];
    }
    (0..count)
        .map(|i| {
            let frac = rat(2 * i as i64, (count - 1) as i64) - Rat::one();
            center + h * frac
        })
        .collect()
}

fn grid_is_regular(phi: &DirectionList, grid: &[Vec<Rat>]) -> Result<bool> {
    let mut index = vec![0usize; grid.len()];
    loop {
        let pt = RationalVector::new(
            index
                .iter()
                .enumerate()
                .map(|(j, &i)| grid[j][i].clone())
                .collect(),
        );
        if !arrangement::is_regular(phi, &pt)? {
            return Ok(false);
        }
        let mut j = 0;
        loop {
            if j == grid.len() {
                return Ok(true);
            }
            index[j] += 1;
            if index[j] < grid[j].len() {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

/// Largest box half-width around the center staying strictly inside the
/// chamber (sign constraints only).
fn chamber_half_width(tau: &Chamber, center: &RationalVector) -> Rat {
    let mut h: Option<Rat> = None;
    for (n, sign) in &tau.signs {
        let a = center.dot_int(n) * rat(*sign as i64, 1);
        let l1: i64 = n.iter().map(|&x| x.abs()).sum();
        let bound = a / rat(2 * l1, 1);
        h = Some(match h {
            None => bound,
            Some(cur) => cur.min(bound),
        });
    }
    h.expect("chamber has at least one wall").max(Rat::zero())
}

/// The closing formula: partition values from local multispline pieces.
/// Exact (y = 0) path: the per-vertex polynomials on tau are evaluated at
/// nu by polynomial extension; the sum over the vertex set collapses to the
/// partition count.
pub fn partition_via_todd_exact(
    phi: &DirectionList,
    nu: &[i64],
    tau: &Chamber,
) -> Result<Cyc> {
    phi.require_salient()?;
    phi.require_spans()?;
    if !chamber_covers(phi, tau, nu)? {
        return Err(Error::NuNotCovered);
    }
    let order = phi.len() - phi.dim;
    let base = RationalVector::from_ints(nu);
    let mut total = Cyc::zero();
    for s in torus::vertex_set(phi)? {
        let piece = tau_vertex_piece(phi, &s, tau, order)?;
        let value = piece.eval_rat(&base.coords);
        let minus_nu: Vec<i64> = nu.iter().map(|x| -x).collect();
        total = total.add_ref(&torus::character(&s, &minus_nu).mul_ref(&value));
    }
    Ok(total)
}

/// Parametric path of the closing formula. The limit form of the inversion
/// theorem is used: the piece of `(-1)^{n_s} T(Φ(s), y_0)` on the alcove
/// adjacent to nu in a generic cone direction is fitted numerically and the
/// operator applied to the fit.
pub fn partition_via_todd(
    phi: &DirectionList,
    y: &ParameterList,
    nu: &[i64],
    tau: &Chamber,
) -> Result<Complex64> {
    if y.is_zero() {
        return Ok(partition_via_todd_exact(phi, nu, tau)?.to_complex64());
    }
    phi.require_salient()?;
    phi.require_spans()?;
    if !chamber_covers(phi, tau, nu)? {
        return Err(Error::NuNotCovered);
    }
    let order = series::truncation_order(phi, y)?;
    let eps = arrangement::generic_direction(
        phi,
        0x5eed,
        Some(&crate::directions::Representation::zero(phi)),
    )?;
    let base = RationalVector::from_ints(nu);
    let limit = arrangement::limit_point(phi, &base, &eps)?;
    // the one-sided limit at nu lands in the chamber of the limit point;
    // the multispline pieces extend analytically over the whole chamber, so
    // the fit box can be anchored deep inside it at unit scale
    let side = chamber_of(phi, &limit)?;
    let (anchor, half_width) = chamber_anchor_box(phi, &side, nu)?;
    let mut total = Complex64::new(0.0, 0.0);
    for s in torus::vertex_set(phi)? {
        let keep = torus::phi_s_indices(phi, &s);
        let phi_s = phi.sublist(&keep)?;
        if !phi_s.spans {
            return Err(Error::NotSpanningSub);
        }
        let n_others = phi.len() - keep.len();
        let y0 = y.sublist(&keep);
        let sign = if n_others % 2 == 1 { -1.0 } else { 1.0 };
        let sampler = multispline_sampler(&phi_s, &y0, sign, &anchor, &half_width)?;
        let op = series::todd_operator_numeric(phi, &s, y, order, None)?;
        let value =
            series::apply_operator_to_sampler(&op, &*sampler, &anchor, &half_width, &base)?;
        let minus_nu: Vec<i64> = nu.iter().map(|x| -x).collect();
        total += torus::character(&s, &minus_nu).to_complex64() * value;
    }
    Ok(total)
}

/// A box `anchor +/- h` inside the chamber, with `nu` within a bounded
/// multiple of h: maximizing h under those constraints keeps the
/// extrapolation ratio of the numeric fit uniformly small. Cone constraints
/// are scale-free, so h reaches its cap away from degenerate data.
fn chamber_anchor_box(
    phi: &DirectionList,
    tau: &Chamber,
    nu: &[i64],
) -> Result<(RationalVector, Rat)> {
    let d = phi.dim;
    for ratio in [3i64, 6, 12] {
        // variables: anchor c (free), half-width h >= 0; maximize h
        let vars = d + 1;
        let mut lp = Problem::new(vars);
        for j in 0..d {
            lp.set_free(j);
        }
        for (normal, sign) in &tau.signs {
            let l1: i64 = normal.iter().map(|&x| x.abs()).sum();
            let mut row = vec![Rat::zero(); vars];
            for (j, &c) in normal.iter().enumerate() {
                row[j] = Rat::from_integer((c * *sign as i64).into());
            }
            row[d] = Rat::from_integer((-l1).into());
            lp.add_row(row, Rel::Ge, Rat::zero());
        }
        // |c_j - nu_j| <= ratio * h
        for j in 0..d {
            let mut row_ge = vec![Rat::zero(); vars];
            row_ge[j] = Rat::one();
            row_ge[d] = Rat::from_integer(ratio.into());
            lp.add_row(row_ge, Rel::Ge, Rat::from_integer(nu[j].into()));
            let mut row_le = vec![Rat::zero(); vars];
            row_le[j] = Rat::one();
            row_le[d] = Rat::from_integer((-ratio).into());
            lp.add_row(row_le, Rel::Le, Rat::from_integer(nu[j].into()));
        }
        let mut cap = vec![Rat::zero(); vars];
        cap[d] = Rat::one();
        lp.add_row(cap.clone(), Rel::Le, rat(3, 2));
        lp.set_objective(cap.clone());
        let Outcome::Optimal { value: h_star, .. } = lp.solve() else {
            continue;
        };
        if !h_star.is_positive() {
            continue;
        }
        // second phase: at the optimal half-width, pull the anchor as close
        // to nu as possible in the sup norm; the extrapolation ratio of the
        // fit is max_j |c_j - nu_j| / h
        let vars2 = d + 2; // c, h, s
        let mut lp2 = Problem::new(vars2);
        for j in 0..d {
            lp2.set_free(j);
        }
        for (normal, sign) in &tau.signs {
            let l1: i64 = normal.iter().map(|&x| x.abs()).sum();
            let mut row = vec![Rat::zero(); vars2];
            for (j, &c) in normal.iter().enumerate() {
                row[j] = Rat::from_integer((c * *sign as i64).into());
            }
            row[d] = Rat::from_integer((-l1).into());
            lp2.add_row(row, Rel::Ge, Rat::zero());
        }
        let mut fix_h = vec![Rat::zero(); vars2];
        fix_h[d] = Rat::one();
        lp2.add_row(fix_h, Rel::Eq, h_star.clone());
        for j in 0..d {
            // |c_j - nu_j| <= s
            let mut up = vec![Rat::zero(); vars2];
            up[j] = Rat::one();
            up[d + 1] = -Rat::one();
            lp2.add_row(up, Rel::Le, Rat::from_integer(nu[j].into()));
            let mut dn = vec![Rat::zero(); vars2];
            dn[j] = Rat::one();
            dn[d + 1] = Rat::one();
            lp2.add_row(dn, Rel::Ge, Rat::from_integer(nu[j].into()));
        }
        let mut obj = vec![Rat::zero(); vars2];
        obj[d + 1] = -Rat::one();
        lp2.set_objective(obj);
        if let Outcome::Optimal { point, .. } = lp2.solve() {
            let anchor = RationalVector::new(point[..d].to_vec());
            return Ok((anchor, h_star));
        }
    }
    Err(Error::SearchExhausted(3))
}

/// A sampler of `sign * T(phi_s, y0)` on the given box: the weight vectors
/// that can contribute anywhere on the box are enumerated once, and terms
/// vanish smoothly where their translate leaves the support, so on a box
/// inside one chamber the sum equals the analytic chamber piece.
fn multispline_sampler(
    phi_s: &DirectionList,
    y0: &ParameterList,
    sign: f64,
    anchor: &RationalVector,
    half_width: &Rat,
) -> Result<Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>> {
    let shifts = region_shifts(phi_s, anchor, half_width)?;
    let i = Complex64::new(0.0, 1.0);
    let terms: Vec<(Vec<f64>, Complex64)> = shifts
        .iter()
        .map(|p| {
            let shift: Vec<f64> = (0..phi_s.dim)
                .map(|coord| {
                    p.iter()
                        .zip(&phi_s.vectors)
                        .map(|(pk, alpha)| pk.to_f64().unwrap_or(0.0) * alpha[coord] as f64)
                        .sum()
                })
                .collect();
            let phase: Complex64 = p
                .iter()
                .zip(&y0.values)
                .map(|(pk, yk)| i * yk * pk.to_f64().unwrap_or(0.0))
                .sum();
            (shift, phase.exp())
        })
        .collect();
    let phi_s = phi_s.clone();
    let y0 = y0.clone();
    let order = 16usize.max(phi_s.len() + 2);
    Ok(Arc::new(move |v: &[f64]| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (shift, weight) in &terms {
            let w: Vec<f64> = v.iter().zip(shift).map(|(x, s)| x - s).collect();
            acc += weight * boxspline::eval_numeric(&phi_s, &y0, &w, order);
        }
        sign * acc
    }))
}

/// All weight vectors p >= 0 whose translate can meet the box
/// `anchor +/- h`: the LP bound per level ranges the target over the box.
fn region_shifts(
    phi: &DirectionList,
    anchor: &RationalVector,
    half_width: &Rat,
) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    let mut stack = vec![BigInt::zero(); phi.len()];
    region_rec(phi, phi.len(), anchor, half_width, &mut stack, &mut out);
    Ok(out)
}

fn region_rec(
    phi: &DirectionList,
    m: usize,
    center: &RationalVector,
    half_width: &Rat,
    stack: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if m == 0 {
        out.push(stack.clone());
        return;
    }
    let Some(bound) = region_bound(phi, m, center, half_width) else {
        return;
    };
    let alpha = &phi.vectors[m - 1];
    let mut p = BigInt::zero();
    while p <= bound {
        let residual = RationalVector::new(
            center
                .coords
                .iter()
                .zip(alpha)
                .map(|(c, &a)| c - Rat::from_integer(&p * BigInt::from(a)))
                .collect(),
        );
        stack[m - 1] = p.clone();
        region_rec(phi, m - 1, &residual, half_width, stack, out);
        p += 1;
    }
    stack[m - 1] = BigInt::zero();
}

/// Max p_m over `{ p >= 0, t in [0,1]^N, w in box :
/// sum p alpha + sum t alpha = center + w }`.
fn region_bound(
    phi: &DirectionList,
    m: usize,
    center: &RationalVector,
    half_width: &Rat,
) -> Option<BigInt> {
    let n = phi.len();
    let d = phi.dim;
    // variables: p (m), t (n), w (d, free in [-h, h])
    let vars = m + n + d;
    let mut lp = Problem::new(vars);
    for j in 0..d {
        lp.set_free(m + n + j);
    }
    for i in 0..d {
        let mut row = vec![Rat::zero(); vars];
        for k in 0..m {
            row[k] = Rat::from_integer(phi.vectors[k][i].into());
        }
        for k in 0..n {
            row[m + k] = Rat::from_integer(phi.vectors[k][i].into());
        }
        row[m + n + i] = -Rat::one();
        lp.add_row(row, Rel::Eq, center.coords[i].clone());
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); vars];
        row[m + k] = Rat::one();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    for j in 0..d {
        let mut row = vec![Rat::zero(); vars];
        row[m + n + j] = Rat::one();
        lp.add_row(row.clone(), Rel::Le, half_width.clone());
        lp.add_row(row, Rel::Ge, -half_width.clone());
    }
    let mut obj = vec![Rat::zero(); vars];
    obj[m - 1] = Rat::one();
    lp.set_objective(obj);
    match lp.solve() {
        Outcome::Optimal { value, .. } => Some(value.floor().to_integer()),
        Outcome::Infeasible => None,
        Outcome::Unbounded => panic!("salient cone keeps shifts bounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
        DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn counts_by_enumeration() {
        let a = phi(1, &[&[1], &[2]]);
        assert_eq!(partition_count(&a, &[5]).unwrap(), BigInt::from(3));
        assert_eq!(partition_count(&a, &[0]).unwrap(), BigInt::from(1));
        assert_eq!(partition_count(&a, &[-1]).unwrap(), BigInt::from(0));
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(partition_count(&b, &[2, 1]).unwrap(), BigInt::from(2));
        assert_eq!(partition_count(&b, &[3, 3]).unwrap(), BigInt::from(4));
        let tent = phi(1, &[&[1], &[-1]]);
        assert_eq!(partition_count(&tent, &[0]), Err(Error::NotSalient));
    }

    #[test]
    fn traces() {
        let a = phi(1, &[&[1], &[2]]);
        // nu = 2: p = (2,0) and (0,1): e^{2ia} + e^{ib}
        let ya = 0.3;
        let yb = -0.2;
        let y = ParameterList::new(vec![Complex64::new(ya, 0.0), Complex64::new(yb, 0.0)]);
        let got = partition_trace(&a, &y, &[2]).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let want = (i * 2.0 * ya).exp() + (i * yb).exp();
        assert!((got - want).norm() < 1e-14);
        // y = 0 equals the count
        let y0 = ParameterList::zeros(2);
        let got = partition_trace(&a, &y0, &[5]).unwrap();
        assert!((got.re - 3.0).abs() < 1e-14);
        // conjugate symmetry for real y
        let yneg = ParameterList::new(vec![Complex64::new(-ya, 0.0), Complex64::new(-yb, 0.0)]);
        let gneg = partition_trace(&a, &yneg, &[2]).unwrap();
        let g = partition_trace(&a, &y, &[2]).unwrap();
        assert!((g.conj() - gneg).norm() < 1e-14);
    }

    #[test]
    fn multispline_values() {
        // T([1]) is the Heaviside function
        let h = phi(1, &[&[1]]);
        assert_eq!(multispline_exact(&h, &RationalVector::new(vec![rat(7, 2)])).unwrap(), Rat::one());
        assert_eq!(
            multispline_exact(&h, &RationalVector::new(vec![rat(-1, 2)])).unwrap(),
            Rat::zero()
        );
        // T([1,2])(v) = v/2 on v > 0
        let a = phi(1, &[&[1], &[2]]);
        assert_eq!(
            multispline_exact(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            multispline_exact(&a, &RationalVector::new(vec![rat(13, 2)])).unwrap(),
            rat(13, 4)
        );
        // min(v1, v2) for the hexagonal list
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let v = RationalVector::new(vec![rat(7, 2), rat(9, 4)]);
        assert_eq!(multispline_exact(&b, &v).unwrap(), rat(9, 4));
    }

    #[test]
    fn multispline_convolution_identity() {
        // T(Φ)(v) = sum_nu count(nu) b(Φ)(v - nu), finitely many terms
        let a = phi(1, &[&[1], &[2]]);
        let v = RationalVector::new(vec![rat(11, 3)]);
        let mut acc = Rat::zero();
        for nu in -1i64..=4 {
            let w = v.sub_int(&[nu]);
            let b = boxspline::eval_exact(&a, &w).unwrap();
            acc += Rat::from_integer(partition_count(&a, &[nu]).unwrap()) * b;
        }
        assert_eq!(acc, multispline_exact(&a, &v).unwrap());
    }

    #[test]
    fn chambers() {
        let a = phi(1, &[&[1], &[2]]);
        let tau = chamber_of(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap();
        assert_eq!(tau.signs[&vec![1]], 1);
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let below = chamber_of(&b, &RationalVector::from_ints(&[2, 1])).unwrap();
        let above = chamber_of(&b, &RationalVector::from_ints(&[1, 2])).unwrap();
        assert_ne!(below, above);
        assert_eq!(below.signs[&vec![1, -1]], 1);
        assert_eq!(above.signs[&vec![1, -1]], -1);
        assert!(chamber_of(&b, &RationalVector::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn todd_formula_matches_brute_force_1d() {
        let a = phi(1, &[&[1], &[2]]);
        let tau = chamber_of(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap();
        for nu in -2i64..=20 {
            if !chamber_covers(&a, &tau, &[nu]).unwrap() {
                continue;
            }
            let got = partition_via_todd_exact(&a, &[nu], &tau).unwrap();
            let want = Cyc::from_rat(Rat::from_integer(partition_count(&a, &[nu]).unwrap()));
            assert_eq!(got, want, "nu = {nu}");
        }
        // nu = -1 lies in (tau - Z) and the formula gives 0 there
        assert!(chamber_covers(&a, &tau, &[-1]).unwrap());
        assert_eq!(partition_via_todd_exact(&a, &[-1], &tau).unwrap(), Cyc::zero());
    }

    #[test]
    fn todd_formula_matches_brute_force_2d() {
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        for witness in [[5i64, 2], [2, 5]] {
            let tau = chamber_of(&b, &RationalVector::from_ints(&witness)).unwrap();
            for x in -2i64..=6 {
                for y in -2i64..=6 {
                    if !chamber_covers(&b, &tau, &[x, y]).unwrap() {
                        continue;
                    }
                    let got = partition_via_todd_exact(&b, &[x, y], &tau).unwrap();
                    let want =
                        Cyc::from_rat(Rat::from_integer(partition_count(&b, &[x, y]).unwrap()));
                    assert_eq!(got, want, "nu = ({x},{y}), witness {witness:?}");
                }
            }
        }
    }

    #[test]
    fn nu_outside_enlarged_chamber_errors() {
        let a = phi(1, &[&[1], &[2]]);
        let tau = chamber_of(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap();
        assert_eq!(
            partition_via_todd_exact(&a, &[-5], &tau),
            Err(Error::NuNotCovered)
        );
    }

    #[test]
    fn parametric_partition_path() {
        let a = phi(1, &[&[1], &[2]]);
        let tau = chamber_of(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap();
        let y = ParameterList::new(vec![
            Complex64::new(0.05, 0.0),
            Complex64::new(-0.04, 0.0),
        ]);
        for nu in [-1i64, 0, 3, 7] {
            let got = partition_via_todd(&a, &y, &[nu], &tau).unwrap();
            let want = partition_trace(&a, &y, &[nu]).unwrap();
            assert!(
                (got - want).norm() < 1e-6,
                "nu = {nu}: {got} vs {want}"
            );
        }
    }
}
