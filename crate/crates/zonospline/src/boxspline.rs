//! Evaluation of the box spline B(Φ,y), its translated variant, and
//! extraction of exact local polynomials on alcoves.
//!
//! Evaluation peels one direction at a time:
//!
//! ```text
//! b(Φ,y)(v) = ∫_0^1 e^{i t y_k} b(Φ\{α_k\}, y\{y_k\})(v - t α_k) dt
//! ```
//!
//! with the segment split at the affine-wall crossings of the subsystem so
//! that each piece of the integrand is smooth. For `y = 0` the integrand is
//! a polynomial of known degree on each piece and the quadrature is exact
//! rational interpolation; for general `y` each piece is integrated by
//! fixed-order Gauss-Legendre.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arrangement::{self, Alcove};
use crate::directions::{zonotope_contains, DirectionList, ParameterList, Representation};
use crate::error::Error;
use crate::lp::{Problem, Rel};
use crate::poly::{integrate_univariate, interp_tensor, interp_univariate, Poly};
use crate::quad;
use crate::rat::{rat, rat_to_f64, Rat, RationalVector};
use crate::Result;

/// An exact local piece of a piecewise-polynomial function on one alcove,
/// or a numeric sampler of a piecewise-analytic one.
#[derive(Clone)]
pub enum PieceKind {
    Exact(Poly<Rat>),
    Sampler(Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>),
}

#[derive(Clone)]
pub struct PiecewiseLocalPiece {
    pub alcove: Alcove,
    pub kind: PieceKind,
}

/// The index to peel in the recursion: the last direction whose removal
/// keeps the list spanning.
fn peel_index(phi: &DirectionList) -> Result<usize> {
    for k in (0..phi.len()).rev() {
        if phi.without(k)?.spans {
            return Ok(k);
        }
    }
    Err(Error::NotSpanning)
}

/// Exact rational value of b(Φ)(v) (the y = 0 box spline) at a regular
/// point.
pub fn eval_exact(phi: &DirectionList, v: &RationalVector) -> Result<Rat> {
    phi.require_spans()?;
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    eval_exact_inner(phi, v)
}

fn eval_exact_inner(phi: &DirectionList, v: &RationalVector) -> Result<Rat> {
    if !zonotope_contains(phi, v) {
        return Ok(Rat::zero());
    }
    if phi.len() == phi.dim {
        return base_case_exact(phi, v);
    }
    let k = peel_index(phi)?;
    let alpha = phi.vectors[k].clone();
    let child = phi.without(k)?;
    let cuts = segment_breakpoints(&child, v, &alpha)?;
    let degree = child.len() - child.dim; // local degree bound of the child
    let mut acc = Rat::zero();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let width = b - a;
        let n_nodes = degree + 1;
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut values = Vec::with_capacity(n_nodes);
        for j in 0..n_nodes {
            let t = a + &width * rat((j + 1) as i64, (n_nodes + 1) as i64);
            let point = v.add_scaled(&-&t, &RationalVector::from_ints(&alpha));
            values.push(eval_exact_inner(&child, &point)?);
            nodes.push(t);
        }
        let coeffs = interp_univariate(&nodes, &values);
        acc += integrate_univariate(&coeffs, a, b);
    }
    Ok(acc)
}

/// Breakpoints 0 = t_0 < ... < t_m = 1 of the map t -> v - t alpha against
/// the affine walls of `list`. Walls parallel to alpha never meet the
/// segment: their constant offset is non-integral because v is regular for
/// the parent list, whose walls include them.
fn segment_breakpoints(
    list: &DirectionList,
    v: &RationalVector,
    alpha: &[i64],
) -> Result<Vec<Rat>> {
    let mut cuts = vec![Rat::zero(), Rat::one()];
    for wall in arrangement::walls(list)? {
        let s: i64 = wall.normal.iter().zip(alpha).map(|(&a, &b)| a * b).sum();
        if s == 0 {
            continue;
        }
        let a = v.dot_int(&wall.normal);
        // n . (v - t alpha) = a - t s integral for t in (0,1)
        let lo = (&a - Rat::from_integer(BigInt::from(s))).min(a.clone());
        let hi = (&a - Rat::from_integer(BigInt::from(s))).max(a.clone());
        let mut m = lo.ceil().to_integer();
        while Rat::from_integer(m.clone()) < hi {
            if Rat::from_integer(m.clone()) > lo {
                let t = (&a - Rat::from_integer(m.clone())) / Rat::from_integer(BigInt::from(s));
                if t > Rat::zero() && t < Rat::one() && !cuts.contains(&t) {
                    cuts.push(t);
                }
            }
            m += BigInt::one();
        }
    }
    cuts.sort();
    Ok(cuts)
}

/// Base case N = d: Φ is a basis; the value is 1/|det| on the open
/// parallelepiped and 0 outside.
fn base_case_exact(phi: &DirectionList, v: &RationalVector) -> Result<Rat> {
    let t = solve_basis(phi, v)?;
    let inside = t.iter().all(|c| c > &Rat::zero() && c < &Rat::one());
    if inside {
        Ok(basis_det_abs(phi).recip())
    } else if t.iter().any(|c| c.is_zero() || c.is_one()) {
        Err(Error::NotRegular)
    } else {
        Ok(Rat::zero())
    }
}

/// Solves sum t_k alpha_k = v for a basis list.
fn solve_basis(phi: &DirectionList, v: &RationalVector) -> Result<Vec<Rat>> {
    let d = phi.dim;
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rat> = phi
                .vectors
                .iter()
                .map(|col| Rat::from_integer(col[i].into()))
                .collect();
            row.push(v.coords[i].clone());
            row
        })
        .collect();
    for col in 0..d {
        let p = (col..d)
            .find(|&i| !m[i][col].is_zero())
            .ok_or(Error::NotSpanning)?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for i in 0..d {
            if i != col && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..=d {
                    let dd = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &dd;
                }
            }
        }
    }
    Ok((0..d).map(|i| &m[i][d] / &m[i][i]).collect())
}

fn basis_det_abs(phi: &DirectionList) -> Rat {
    let d = phi.dim;
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            phi.vectors
                .iter()
                .map(|col| Rat::from_integer(col[i].into()))
                .collect()
        })
        .collect();
    let mut det = Rat::one();
    for col in 0..d {
        let Some(p) = (col..d).find(|&i| !m[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for i in col + 1..d {
            if !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..d {
                    let dd = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &dd;
                }
            }
        }
    }
    det.abs()
}

/// b(Φ,y)(v) for a general complex parameter list, by the same recursion
/// with Gauss-Legendre quadrature on each smooth piece.
pub fn eval(phi: &DirectionList, y: &ParameterList, v: &RationalVector) -> Result<Complex64> {
    phi.require_spans()?;
    if y.values.len() != phi.len() {
        return Err(Error::Parse(format!(
            "parameter list length {} != N = {}",
            y.values.len(),
            phi.len()
        )));
    }
    if !arrangement::is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    if y.is_zero() {
        let exact = eval_exact_inner(phi, v)?;
        return Ok(Complex64::new(rat_to_f64(&exact), 0.0));
    }
    let order = quadrature_order(phi.len());
    Ok(eval_numeric(phi, y, &v.to_f64(), order))
}

fn quadrature_order(n: usize) -> usize {
    16usize.max(n + 2)
}

/// Numeric recursion without the regularity precondition; quadrature makes
/// wall crossings measure zero. `v` is raw floating point.
pub fn eval_numeric(
    phi: &DirectionList,
    y: &ParameterList,
    v: &[f64],
    order: usize,
) -> Complex64 {
    if phi.len() == phi.dim {
        return base_case_numeric(phi, y, v);
    }
    let k = peel_index(phi).expect("spanning checked by caller");
    let alpha = &phi.vectors[k];
    let child = phi.without(k).expect("validated sublist");
    let yk = y.values[k];
    let y_child = y.without(k);
    let cuts = segment_breakpoints_numeric(&child, v, alpha);
    let alpha_f: Vec<f64> = alpha.iter().map(|&x| x as f64).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        acc += quad::integrate_complex(w[0], w[1], order, |t| {
            let point: Vec<f64> = v
                .iter()
                .zip(&alpha_f)
                .map(|(a, b)| a - t * b)
                .collect();
            (Complex64::new(0.0, 1.0) * yk * t).exp()
                * eval_numeric(&child, &y_child, &point, order)
        });
    }
    acc
}

fn segment_breakpoints_numeric(list: &DirectionList, v: &[f64], alpha: &[i64]) -> Vec<f64> {
    let mut cuts = vec![0.0, 1.0];
    for wall in arrangement::walls(list).expect("child spans") {
        let s: i64 = wall.normal.iter().zip(alpha).map(|(&a, &b)| a * b).sum();
        if s == 0 {
            continue;
        }
        let a: f64 = wall
            .normal
            .iter()
            .zip(v)
            .map(|(&n, x)| n as f64 * x)
            .sum();
        let (lo, hi) = if s > 0 { (a - s as f64, a) } else { (a, a - s as f64) };
        let mut m = lo.ceil();
        while m < hi {
            let t = (a - m) / s as f64;
            if t > 1e-14 && t < 1.0 - 1e-14 {
                cuts.push(t);
            }
            m += 1.0;
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    cuts
}

fn base_case_numeric(phi: &DirectionList, y: &ParameterList, v: &[f64]) -> Complex64 {
    let d = phi.dim;
    let mut m: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut row: Vec<f64> = phi.vectors.iter().map(|col| col[i] as f64).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let mut det = 1.0f64;
    for col in 0..d {
        let p = (col..d)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col];
        det *= pivot;
        for i in 0..d {
            if i != col && m[i][col] != 0.0 {
                let f = m[i][col] / pivot;
                for j in col..=d {
                    m[i][j] -= m[col][j] * f;
                }
            }
        }
    }
    let t: Vec<f64> = (0..d).map(|i| m[i][d] / m[i][i]).collect();
    if t.iter().all(|&c| c > 0.0 && c < 1.0) {
        let phase: Complex64 = t
            .iter()
            .zip(&y.values)
            .map(|(&tk, yk)| Complex64::new(0.0, 1.0) * yk * tk)
            .sum::<Complex64>()
            .exp();
        phase / det.abs()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// The exact local polynomial of b(Φ) on an alcove, of total degree at most
/// N - d, by interpolation on a grid strictly inside the alcove. Zero for
/// alcoves outside the zonotope. Results are cached per (Φ, alcove).
pub fn local_polynomial(phi: &DirectionList, alcove: &Alcove) -> Result<PiecewiseLocalPiece> {
    let poly = local_polynomial_raw(phi, alcove)?;
    Ok(PiecewiseLocalPiece { alcove: alcove.clone(), kind: PieceKind::Exact(poly) })
}

type PieceKey = ((usize, Vec<Vec<i64>>), Vec<(Vec<i64>, BigInt)>);
static PIECE_CACHE: Lazy<Mutex<HashMap<PieceKey, Arc<Poly<Rat>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub(crate) fn local_polynomial_raw(phi: &DirectionList, alcove: &Alcove) -> Result<Poly<Rat>> {
    phi.require_spans()?;
    let key = ((phi.dim, phi.vectors.clone()), alcove.key());
    if let Some(hit) = PIECE_CACHE.lock().unwrap().get(&key) {
        return Ok((**hit).clone());
    }
    let poly = if zonotope_contains(phi, &alcove.witness) {
        let degree = phi.len() - phi.dim;
        let h = inscribed_half_width(alcove);
        let axes: Vec<Vec<Rat>> = (0..phi.dim)
            .map(|j| grid_axis(&alcove.witness.coords[j], &h, degree + 1))
            .collect();
        let poly = interp_tensor(&axes, |pt| {
            eval_exact_inner(phi, &RationalVector::new(pt.to_vec()))
                .expect("grid nodes are interior, hence regular")
        });
        self_check(phi, alcove, &poly, &h);
        poly
    } else {
        Poly::zero(phi.dim)
    };
    PIECE_CACHE
        .lock()
        .unwrap()
        .insert(key, Arc::new(poly.clone()));
    Ok(poly)
}

/// Half-width of an axis-aligned box centered at the witness and strictly
/// inside the alcove: nine tenths of the slab slack divided by the l1 norm
/// of each normal.
pub(crate) fn inscribed_half_width(alcove: &Alcove) -> Rat {
    let mut h: Option<Rat> = None;
    for (n, s) in &alcove.slabs {
        let a = alcove.witness.dot_int(n);
        let lo = Rat::from_integer(s.clone());
        let hi = Rat::from_integer(s + BigInt::one());
        let slack = (&a - &lo).min(&hi - &a);
        let l1: i64 = n.iter().map(|&x| x.abs()).sum();
        let bound = slack * rat(9, 10 * l1);
        h = Some(match h {
            None => bound,
            Some(cur) => cur.min(bound),
        });
    }
    h.expect("alcove has at least one wall")
}

fn grid_axis(center: &Rat, h: &Rat, count: usize) -> Vec<Rat> {
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

fn self_check(phi: &DirectionList, alcove: &Alcove, poly: &Poly<Rat>, h: &Rat) {
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..5 {
        let pt: Vec<Rat> = alcove
            .witness
            .coords
            .iter()
            .map(|c| {
                let num = (next() % 2001) as i64 - 1000;
                c + h * rat(num, 1000)
            })
            .collect();
        let v = RationalVector::new(pt.clone());
        let direct = eval_exact_inner(phi, &v).expect("interior point");
        let interpolated = poly.eval_rat(&pt);
        assert_eq!(
            direct, interpolated,
            "local polynomial self-check failed on alcove {:?}",
            alcove.slabs
        );
    }
}

/// The translated box spline `B_r(Φ,y)(v) = e^{-i<r,y>} B(Φ,y)(v + r)`.
pub fn eval_translated(
    phi: &DirectionList,
    y: &ParameterList,
    rrep: &Representation,
    v: &RationalVector,
) -> Result<Complex64> {
    let r = rrep.point(phi);
    let shifted = v + &r;
    if !arrangement::is_regular(phi, &shifted)? {
        return Err(Error::NotRegularShifted);
    }
    let inner = eval(phi, y, &shifted)?;
    let phase = (-Complex64::new(0.0, 1.0) * rrep.pair_y(y)).exp();
    Ok(phase * inner)
}

/// Exact translated value for y = 0: `b(Φ)(v + r)`.
pub fn eval_translated_exact(
    phi: &DirectionList,
    rrep: &Representation,
    v: &RationalVector,
) -> Result<Rat> {
    let r = rrep.point(phi);
    let shifted = v + &r;
    if !arrangement::is_regular(phi, &shifted)? {
        return Err(Error::NotRegularShifted);
    }
    eval_exact_inner(phi, &shifted)
}

/// The bounding interval of the support of the 1-D spline `b_r(Φ)`.
pub fn support_interval_1d(phi: &DirectionList, rrep: &Representation) -> Result<(Rat, Rat)> {
    if phi.dim != 1 {
        return Err(Error::Not1D);
    }
    let (lo, hi) = crate::directions::slab_bounds(phi, &[1]);
    let r = rrep.point(phi);
    Ok((
        Rat::from_integer(lo) - &r.coords[0],
        Rat::from_integer(hi) - &r.coords[0],
    ))
}

/// Bounding box of Z(Φ) in coordinates, used by enumeration helpers.
pub fn zonotope_bbox(phi: &DirectionList) -> Vec<(BigInt, BigInt)> {
    (0..phi.dim)
        .map(|j| {
            let mut e = vec![0i64; phi.dim];
            e[j] = 1;
            crate::directions::slab_bounds(phi, &e)
        })
        .collect()
}

/// Exact maximum of a coordinate over an alcove (used in tests and for
/// enumeration windows).
pub fn alcove_bbox(alcove: &Alcove, dim: usize) -> Vec<(Rat, Rat)> {
    (0..dim)
        .map(|j| {
            let mut lo = None;
            let mut hi = None;
            for sign in [1i64, -1] {
                let mut lp = Problem::new(dim);
                for i in 0..dim {
                    lp.set_free(i);
                }
                for (n, s) in &alcove.slabs {
                    let row: Vec<Rat> =
                        n.iter().map(|&x| Rat::from_integer(x.into())).collect();
                    lp.add_row(row.clone(), Rel::Ge, Rat::from_integer(s.clone()));
                    lp.add_row(row, Rel::Le, Rat::from_integer(s + BigInt::one()));
                }
                let mut obj = vec![Rat::zero(); dim];
                obj[j] = rat(sign, 1);
                lp.set_objective(obj);
                match lp.solve() {
                    crate::lp::Outcome::Optimal { value, .. } => {
                        if sign == 1 {
                            hi = Some(value);
                        } else {
                            lo = Some(-value);
                        }
                    }
                    other => panic!("alcove unbounded or empty: {other:?}"),
                }
            }
            (lo.unwrap(), hi.unwrap())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
        DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn q1(r: Rat) -> RationalVector {
        RationalVector::new(vec![r])
    }

    #[test]
    fn example_table_for_1_2() {
        // the [omega, 2 omega] table: t/2, 1/2, (3-t)/2 on (0,1), (1,2), (2,3)
        let a = phi(1, &[&[1], &[2]]);
        assert_eq!(eval_exact(&a, &q1(rat(1, 2))).unwrap(), rat(1, 4));
        assert_eq!(eval_exact(&a, &q1(rat(1, 4))).unwrap(), rat(1, 8));
        assert_eq!(eval_exact(&a, &q1(rat(3, 2))).unwrap(), rat(1, 2));
        assert_eq!(eval_exact(&a, &q1(rat(5, 2))).unwrap(), rat(1, 4));
        assert_eq!(eval_exact(&a, &q1(rat(11, 4))).unwrap(), rat(1, 8));
        assert_eq!(eval_exact(&a, &q1(rat(7, 2))).unwrap(), rat_int(0));
        assert_eq!(eval_exact(&a, &q1(rat(-1, 2))).unwrap(), rat_int(0));
        assert_eq!(eval_exact(&a, &q1(rat_int(1))), Err(Error::NotRegular));
    }

    #[test]
    fn tent_function() {
        // [omega, -omega]: the defining integral gives the tent 1 - |t|
        let a = phi(1, &[&[1], &[-1]]);
        assert_eq!(eval_exact(&a, &q1(rat(-1, 2))).unwrap(), rat(1, 2));
        assert_eq!(eval_exact(&a, &q1(rat(1, 2))).unwrap(), rat(1, 2));
        assert_eq!(eval_exact(&a, &q1(rat(1, 4))).unwrap(), rat(3, 4));
        assert_eq!(eval_exact(&a, &q1(rat(3, 2))).unwrap(), rat_int(0));
    }

    #[test]
    fn unit_square_indicator() {
        let a = phi(2, &[&[1, 0], &[0, 1]]);
        let v = RationalVector::new(vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(eval_exact(&a, &v).unwrap(), rat_int(1));
        let outside = RationalVector::new(vec![rat(4, 3), rat(2, 3)]);
        assert_eq!(eval_exact(&a, &outside).unwrap(), rat_int(0));
    }

    #[test]
    fn hexagon_partition_of_unity() {
        let a = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let v = RationalVector::new(vec![rat(1, 3), rat(4, 7)]);
        let mut total = Rat::zero();
        for x in -3..4 {
            for y in -3..4 {
                total += eval_exact(&a, &v.sub_int(&[x, y])).unwrap();
            }
        }
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn local_pieces_of_1_2() {
        let a = phi(1, &[&[1], &[2]]);
        let mid = arrangement::alcove_of(&a, &q1(rat(3, 2))).unwrap();
        let piece = local_polynomial_raw(&a, &mid).unwrap();
        assert_eq!(piece.eval_rat(&[rat_int(17)]), rat(1, 2)); // constant 1/2
        assert_eq!(piece.total_degree(), 0);

        let last = arrangement::alcove_of(&a, &q1(rat(5, 2))).unwrap();
        let piece = local_polynomial_raw(&a, &last).unwrap();
        // (3 - t)/2 extends to all of V
        assert_eq!(piece.eval_rat(&[rat_int(3)]), rat_int(0));
        assert_eq!(piece.eval_rat(&[rat_int(0)]), rat(3, 2));

        let outside = arrangement::alcove_of(&a, &q1(rat(9, 2))).unwrap();
        let piece = local_polynomial_raw(&a, &outside).unwrap();
        assert!(piece.is_zero());
    }

    #[test]
    fn numeric_matches_exact_at_zero_parameters() {
        let a = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let v = RationalVector::new(vec![rat(5, 4), rat(3, 7)]);
        let exact = rat_to_f64(&eval_exact(&a, &v).unwrap());
        let y = ParameterList::new(vec![Complex64::new(1e-9, 0.0); 3]);
        let numeric = eval(&a, &y, &v).unwrap();
        assert!((numeric.re - exact).abs() < 1e-7, "{numeric} vs {exact}");
    }

    #[test]
    fn parametric_single_direction() {
        // b([omega], [y])(t) = e^{i t y} on (0,1)
        let a = phi(1, &[&[1]]);
        let y = ParameterList::new(vec![Complex64::new(0.1, 0.0)]);
        let got = eval(&a, &y, &q1(rat(1, 2))).unwrap();
        let want = (Complex64::new(0.0, 1.0) * 0.1 * 0.5).exp();
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn translated_evaluation() {
        let a = phi(1, &[&[1], &[2]]);
        let center = crate::directions::center_representation(&a);
        let y0 = ParameterList::zeros(2);
        let got = eval_translated(&a, &y0, &center, &q1(rat_int(0))).unwrap();
        assert!((got.re - 0.5).abs() < 1e-14 && got.im == 0.0);
        assert_eq!(
            eval_translated_exact(&a, &center, &q1(rat_int(0))).unwrap(),
            rat(1, 2)
        );
        // r = 0 is plain evaluation
        let zero = Representation::zero(&a);
        assert_eq!(
            eval_translated_exact(&a, &zero, &q1(rat(3, 2))).unwrap(),
            rat(1, 2)
        );
    }
}
