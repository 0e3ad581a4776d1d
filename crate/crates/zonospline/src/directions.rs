//! The direction list Φ, its zonotope, representations of translation
//! points, and finitely supported lattice functions.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::arrangement;
use crate::error::Error;
use crate::lp::{Problem, Rel};
use crate::rat::{rat, Rat, RationalVector, QComplex};
use crate::Result;

/// The list Φ of N integer direction vectors in Z^d, with spanning and
/// salience flags computed exactly at validation time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectionList {
    pub dim: usize,
    pub vectors: Vec<Vec<i64>>,
    #[serde(skip)]
    pub spans: bool,
    #[serde(skip)]
    pub salient: bool,
}

impl DirectionList {
    /// Builds and validates a direction list from raw integer vectors.
    pub fn new(dim: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        let raw = DirectionList { dim, vectors, spans: false, salient: false };
        validate(raw)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The sublist obtained by dropping index `k`.
    pub fn without(&self, k: usize) -> Result<DirectionList> {
        let mut vectors = self.vectors.clone();
        vectors.remove(k);
        DirectionList::new(self.dim, vectors)
    }

    /// The sublist with the given indices kept, in order.
    pub fn sublist(&self, keep: &[usize]) -> Result<DirectionList> {
        let vectors = keep.iter().map(|&k| self.vectors[k].clone()).collect();
        DirectionList::new(self.dim, vectors)
    }

    pub fn require_spans(&self) -> Result<()> {
        if self.spans {
            Ok(())
        } else {
            Err(Error::NotSpanning)
        }
    }

    pub fn require_salient(&self) -> Result<()> {
        if self.salient {
            Ok(())
        } else {
            Err(Error::NotSalient)
        }
    }

    /// Sum of the direction vectors (twice the box-spline center).
    pub fn vector_sum(&self) -> Vec<i64> {
        let mut acc = vec![0i64; self.dim];
        for v in &self.vectors {
            for (a, &b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
        acc
    }
}

/// Exact rank of a list of integer vectors.
pub fn rank_of(vectors: &[Vec<i64>], dim: usize) -> usize {
    let mut rows: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for j in col..dim {
                    let d = &rows[rank][j] * &f;
                    rows[i][j] = &rows[i][j] - &d;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Checks the raw vectors and computes the `spans` and `salient` flags.
pub fn validate(raw: DirectionList) -> Result<DirectionList> {
    if raw.vectors.is_empty() {
        return Err(Error::EmptyList);
    }
    for v in &raw.vectors {
        if v.len() != raw.dim {
            return Err(Error::DimensionMismatch { expected: raw.dim, got: v.len() });
        }
    }
    let spans = rank_of(&raw.vectors, raw.dim) == raw.dim;
    // salient iff a strictly positive functional exists: u . alpha_k >= 1
    let mut lp = Problem::new(raw.dim);
    for j in 0..raw.dim {
        lp.set_free(j);
    }
    for v in &raw.vectors {
        lp.add_row(
            v.iter().map(|&x| Rat::from_integer(x.into())).collect(),
            Rel::Ge,
            Rat::one(),
        );
    }
    let salient = lp.feasible_point().is_some();
    Ok(DirectionList { spans, salient, ..raw })
}

/// Decides `r in Z(Phi)` by exact LP feasibility of
/// `{ t in [0,1]^N : sum t_k alpha_k = r }`.
pub fn zonotope_contains(phi: &DirectionList, r: &RationalVector) -> bool {
    zonotope_point(phi, r).is_some()
}

/// A cube preimage of `r` under the zonotope map, if one exists.
pub fn zonotope_point(phi: &DirectionList, r: &RationalVector) -> Option<Vec<Rat>> {
    let n = phi.len();
    let mut lp = Problem::new(n);
    for i in 0..phi.dim {
        let coeffs: Vec<Rat> = phi
            .vectors
            .iter()
            .map(|v| Rat::from_integer(v[i].into()))
            .collect();
        lp.add_row(coeffs, Rel::Eq, r.coords[i].clone());
    }
    for k in 0..n {
        let mut row = vec![Rat::zero(); n];
        row[k] = Rat::one();
        lp.add_row(row, Rel::Le, Rat::one());
    }
    lp.feasible_point()
}

/// The extreme values of `n . v` over Z(Phi): the zonotope is exactly the
/// intersection of the slabs `m_n <= n . v <= M_n` over all wall normals.
pub fn slab_bounds(phi: &DirectionList, normal: &[i64]) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for v in &phi.vectors {
        let d: i64 = v.iter().zip(normal).map(|(&a, &b)| a * b).sum();
        if d > 0 {
            hi += d;
        } else {
            lo += d;
        }
    }
    (lo, hi)
}

/// True iff `r + t eps` stays in Z(Phi) for all small `t > 0`: the facet
/// slabs active at `r` must be relaxed in the `eps` direction.
pub fn tangent_cone_contains(
    phi: &DirectionList,
    rrep: &Representation,
    eps: &RationalVector,
) -> Result<bool> {
    let r = rrep.point(phi);
    if !zonotope_contains(phi, &r) {
        return Err(Error::PointOutsideZonotope);
    }
    for wall in arrangement::walls(phi)? {
        let (lo, hi) = slab_bounds(phi, &wall.normal);
        let a = r.dot_int(&wall.normal);
        let s = eps.dot_int(&wall.normal);
        if a == Rat::from_integer(hi) && s.is_positive() {
            return Ok(false);
        }
        if a == Rat::from_integer(lo) && s.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A Φ-representation of a point: rational weights r_k with
/// `r = sum r_k alpha_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub entries: Vec<Rat>,
}

impl Representation {
    pub fn new(entries: Vec<Rat>) -> Self {
        Representation { entries }
    }

    pub fn zero(phi: &DirectionList) -> Self {
        Representation { entries: vec![Rat::zero(); phi.len()] }
    }

    /// The represented point `sum r_k alpha_k`.
    pub fn point(&self, phi: &DirectionList) -> RationalVector {
        let mut coords = vec![Rat::zero(); phi.dim];
        for (rk, v) in self.entries.iter().zip(&phi.vectors) {
            for (c, &x) in coords.iter_mut().zip(v) {
                *c = &*c + &(rk * Rat::from_integer(x.into()));
            }
        }
        RationalVector::new(coords)
    }

    /// `<r, y> = sum r_k y_k` as a complex number.
    pub fn pair_y(&self, y: &ParameterList) -> Complex64 {
        self.entries
            .iter()
            .zip(&y.values)
            .map(|(r, y)| Complex64::new(crate::rat::rat_to_f64(r), 0.0) * y)
            .sum()
    }
}

/// The center of the box spline, represented by weights `[1/2, ..., 1/2]`.
pub fn center_representation(phi: &DirectionList) -> Representation {
    Representation::new(vec![rat(1, 2); phi.len()])
}

/// Any exact representation of `r` with entries in `[0, 1]`, found by LP
/// with a deterministic pivot rule.
pub fn any_representation(phi: &DirectionList, r: &RationalVector) -> Result<Representation> {
    match zonotope_point(phi, r) {
        Some(entries) => Ok(Representation::new(entries)),
        None => Err(Error::PointOutsideZonotope),
    }
}

/// The parameter list y of N complex numbers attached to Φ.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterList {
    pub values: Vec<Complex64>,
}

impl ParameterList {
    pub fn new(values: Vec<Complex64>) -> Self {
        ParameterList { values }
    }

    pub fn zeros(n: usize) -> Self {
        ParameterList { values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|y| y.re == 0.0 && y.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|y| y.norm()).fold(0.0, f64::max)
    }

    /// The sublist for the kept indices.
    pub fn sublist(&self, keep: &[usize]) -> ParameterList {
        ParameterList { values: keep.iter().map(|&k| self.values[k]).collect() }
    }

    pub fn without(&self, k: usize) -> ParameterList {
        let mut values = self.values.clone();
        values.remove(k);
        ParameterList { values }
    }
}

/// A finitely supported function Z^d -> C with exact rational-complex
/// values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LatticeFunction {
    pub entries: BTreeMap<Vec<i64>, QComplex>,
}

impl LatticeFunction {
    pub fn new() -> Self {
        LatticeFunction { entries: BTreeMap::new() }
    }

    pub fn delta(at: Vec<i64>) -> Self {
        let mut f = LatticeFunction::new();
        f.set(at, QComplex::one());
        f
    }

    pub fn set(&mut self, at: Vec<i64>, value: QComplex) {
        if value.is_zero() {
            self.entries.remove(&at);
        } else {
            self.entries.insert(at, value);
        }
    }

    pub fn value(&self, at: &[i64]) -> QComplex {
        self.entries.get(at).cloned().unwrap_or_else(QComplex::zero)
    }

    /// The translate `v -> f(v - kappa)`.
    pub fn shifted(&self, kappa: &[i64]) -> LatticeFunction {
        let mut out = LatticeFunction::new();
        for (k, v) in &self.entries {
            let nk: Vec<i64> = k.iter().zip(kappa).map(|(a, b)| a + b).collect();
            out.set(nk, v.clone());
        }
        out
    }
}

/// Floor of n . v for an integer normal, as a BigInt.
pub fn slab_index(normal: &[i64], v: &RationalVector) -> BigInt {
    v.dot_int(normal).floor().to_integer()
}

pub fn rat_from_bigint(b: &BigInt) -> Rat {
    BigRational::from_integer(b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
        DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validate_flags() {
        let a = phi(1, &[&[1], &[2]]);
        assert!(a.spans && a.salient);
        let b = phi(1, &[&[1], &[-1]]);
        assert!(b.spans && !b.salient);
        let c = phi(2, &[&[1, 0]]);
        assert!(!c.spans);
        assert!(DirectionList::new(1, vec![]).is_err());
        assert!(matches!(
            DirectionList::new(2, vec![vec![1, 0], vec![1]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zonotope_membership() {
        let a = phi(1, &[&[1], &[2]]);
        assert!(zonotope_contains(&a, &RationalVector::from_ints(&[3])));
        assert!(!zonotope_contains(&a, &RationalVector::new(vec![rat(7, 2)])));
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(zonotope_contains(
            &b,
            &RationalVector::new(vec![rat(3, 2), rat_int(1)])
        ));
        assert!(!zonotope_contains(
            &b,
            &RationalVector::new(vec![rat_int(2), rat(1, 2)])
        ));
    }

    #[test]
    fn tangent_cones() {
        let a = phi(1, &[&[1], &[2]]);
        let zero = Representation::zero(&a);
        let plus = RationalVector::from_ints(&[1]);
        let minus = RationalVector::from_ints(&[-1]);
        assert!(tangent_cone_contains(&a, &zero, &plus).unwrap());
        assert!(!tangent_cone_contains(&a, &zero, &minus).unwrap());
        let center = center_representation(&a);
        assert!(tangent_cone_contains(&a, &center, &plus).unwrap());
        assert!(tangent_cone_contains(&a, &center, &minus).unwrap());
        // point outside the zonotope is a hard error
        let bad = Representation::new(vec![rat_int(2), rat_int(1)]);
        assert_eq!(
            tangent_cone_contains(&a, &bad, &plus),
            Err(Error::PointOutsideZonotope)
        );
    }

    #[test]
    fn representations() {
        let a = phi(1, &[&[1], &[2]]);
        let c = center_representation(&a);
        assert_eq!(c.point(&a), RationalVector::new(vec![rat(3, 2)]));
        let r = any_representation(&a, &RationalVector::from_ints(&[2])).unwrap();
        assert_eq!(r.point(&a), RationalVector::from_ints(&[2]));
        assert!(r.entries.iter().all(|e| *e >= Rat::zero() && *e <= Rat::one()));
        assert!(any_representation(&a, &RationalVector::new(vec![rat(7, 2)])).is_err());
    }
}
