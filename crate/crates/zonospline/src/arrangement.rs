//! Walls and affine walls of the arrangement attached to Φ, alcoves, the
//! regularity and genericity predicates, and the exact realization of the
//! one-sided limit from a generic direction.
//!
//! For a primitive integral normal n the values `n . lambda` over the
//! lattice are exactly Z, so affine walls of the wall `n . v = 0` are the
//! integer offsets `n . v = m`. Regularity is therefore a finite exact
//! test, and an alcove is identified by its vector of slab indices
//! `floor(n . v)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use crate::directions::{rank_of, slab_index, DirectionList};
use crate::error::Error;
use crate::rat::{next_integer_hit, rat, Rat, RationalVector};
use crate::Result;

/// A linear wall, identified by its primitive normal (content one, first
/// nonzero coordinate positive).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    pub normal: Vec<i64>,
}

/// An open alcove of the affine arrangement: the set of points v with
/// `slab[n] < n . v < slab[n] + 1` for every wall normal n.
#[derive(Debug, Clone)]
pub struct Alcove {
    pub witness: RationalVector,
    pub slabs: BTreeMap<Vec<i64>, BigInt>,
}

impl PartialEq for Alcove {
    fn eq(&self, other: &Self) -> bool {
        self.slabs == other.slabs
    }
}
impl Eq for Alcove {}

impl Alcove {
    /// A canonical key for caching local pieces per alcove.
    pub fn key(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.slabs.iter().map(|(n, s)| (n.clone(), s.clone())).collect()
    }

    /// The alcove translated by an integer vector: slab indices shift by
    /// `n . xi` exactly.
    pub fn translated(&self, xi: &[i64]) -> Alcove {
        let witness = self.witness.add_int(xi);
        let slabs = self
            .slabs
            .iter()
            .map(|(n, s)| {
                let shift: i64 = n.iter().zip(xi).map(|(&a, &b)| a * b).sum();
                (n.clone(), s + BigInt::from(shift))
            })
            .collect();
        Alcove { witness, slabs }
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.slabs.iter().all(|(n, s)| {
            let a = v.dot_int(n);
            let lo = Rat::from_integer(s.clone());
            let hi = Rat::from_integer(s + BigInt::from(1));
            a > lo && a < hi
        })
    }
}

/// The distinct hyperplanes spanned by rank-(d-1) subsets of Φ. Per-list
/// results are cached process-wide.
pub fn walls(phi: &DirectionList) -> Result<Vec<Wall>> {
    static CACHE: Lazy<Mutex<HashMap<(usize, Vec<Vec<i64>>), Vec<Wall>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    phi.require_spans()?;
    let cache_key = (phi.dim, phi.vectors.clone());
    if let Some(w) = CACHE.lock().unwrap().get(&cache_key) {
        return Ok(w.clone());
    }
    let d = phi.dim;
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    for subset in combinations(phi.len(), d - 1) {
        let vecs: Vec<Vec<i64>> = subset.iter().map(|&k| phi.vectors[k].clone()).collect();
        if rank_of(&vecs, d) != d - 1 {
            continue;
        }
        if let Some(normal) = orthogonal_primitive(&vecs, d) {
            set.insert(normal);
        }
    }
    let out: Vec<Wall> = set.into_iter().map(|normal| Wall { normal }).collect();
    CACHE.lock().unwrap().insert(cache_key, out.clone());
    Ok(out)
}

/// All index subsets of {0..n} of the given size.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// The primitive integer normal of the hyperplane spanned by `vecs`
/// (which must have rank d-1), normalized to have positive first nonzero
/// coordinate and content one.
fn orthogonal_primitive(vecs: &[Vec<i64>], d: usize) -> Option<Vec<i64>> {
    // solve vecs . n = 0 by rational elimination
    let mut rows: Vec<Vec<Rat>> = vecs
        .iter()
        .map(|v| v.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for j in 0..d {
                    let dd = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - &dd;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free_col = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut n = vec![Rat::zero(); d];
    n[free_col] = Rat::one();
    for (row_idx, &pc) in pivot_cols.iter().enumerate() {
        // pivot row: x_pc = -(coeff of free col)/pivot
        let pivot = rows[row_idx][pc].clone();
        n[pc] = -(&rows[row_idx][free_col] / &pivot);
    }
    // clear denominators, reduce content, fix sign
    let mut lcm = BigInt::from(1);
    for c in &n {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = n
        .iter()
        .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return None;
    }
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    Some(
        ints.into_iter()
            .map(|c| i64::try_from(&c).expect("wall normal exceeds i64"))
            .collect(),
    )
}

/// True iff v lies on no affine wall: `n . v` is never an integer.
pub fn is_regular(phi: &DirectionList, v: &RationalVector) -> Result<bool> {
    Ok(walls(phi)?
        .iter()
        .all(|w| !v.dot_int(&w.normal).is_integer()))
}

/// True iff eps lies on no wall: `n . eps` is never zero.
pub fn is_generic(phi: &DirectionList, eps: &RationalVector) -> Result<bool> {
    Ok(walls(phi)?
        .iter()
        .all(|w| !eps.dot_int(&w.normal).is_zero()))
}

/// The alcove of a regular point, identified by slab indices.
pub fn alcove_of(phi: &DirectionList, v: &RationalVector) -> Result<Alcove> {
    if !is_regular(phi, v)? {
        return Err(Error::NotRegular);
    }
    let slabs = walls(phi)?
        .into_iter()
        .map(|w| {
            let idx = slab_index(&w.normal, v);
            (w.normal, idx)
        })
        .collect();
    Ok(Alcove { witness: v.clone(), slabs })
}

/// The smallest `t > 0` at which `v + t eps` meets an affine wall.
/// `None` cannot occur for spanning Φ and generic eps, but the contract
/// keeps the option open.
pub fn first_crossing(
    phi: &DirectionList,
    v: &RationalVector,
    eps: &RationalVector,
) -> Result<Option<Rat>> {
    if !is_generic(phi, eps)? {
        return Err(Error::NotGeneric);
    }
    let mut best: Option<Rat> = None;
    for w in walls(phi)? {
        let a = v.dot_int(&w.normal);
        let s = eps.dot_int(&w.normal);
        let t = next_integer_hit(&a, &s);
        debug_assert!(t.is_positive());
        if best.as_ref().map_or(true, |b| &t < b) {
            best = Some(t);
        }
    }
    Ok(best)
}

/// The point `v + (t*/2) eps` with t* the first crossing: a regular point
/// in the alcove adjacent to v on the eps side. Evaluating a local piece
/// there and then at v realizes `lim_eps` exactly, since local pieces are
/// polynomial (or analytic) on the alcove.
pub fn limit_point(
    phi: &DirectionList,
    v: &RationalVector,
    eps: &RationalVector,
) -> Result<RationalVector> {
    let t = first_crossing(phi, v, eps)?.expect("spanning arrangement always crosses");
    let half = t / rat(2, 1);
    Ok(v.add_scaled(&half, eps))
}

/// Deterministic seeded search for a generic rational direction, optionally
/// constrained to the tangent cone of the zonotope at a represented point.
pub fn generic_direction(
    phi: &DirectionList,
    seed: u64,
    cone: Option<&crate::directions::Representation>,
) -> Result<RationalVector> {
    phi.require_spans()?;
    const BUDGET: usize = 20_000;
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for attempt in 0..BUDGET {
        let span = 3 + (attempt / 500) as i64;
        let denom = 1 + (next() % 4) as i64;
        let coords: Vec<Rat> = (0..phi.dim)
            .map(|_| {
                let raw = (next() % (2 * span as u64 + 1)) as i64 - span;
                rat(raw, denom)
            })
            .collect();
        let eps = RationalVector::new(coords);
        if eps.is_zero() || !is_generic(phi, &eps)? {
            continue;
        }
        match cone {
            None => return Ok(eps),
            Some(rrep) => {
                if crate::directions::tangent_cone_contains(phi, rrep, &eps)? {
                    return Ok(eps);
                }
            }
        }
    }
    Err(Error::SearchExhausted(BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::Representation;
    use crate::rat::rat_int;

    fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
        DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn qv(vals: &[Rat]) -> RationalVector {
        RationalVector::new(vals.to_vec())
    }

    #[test]
    fn wall_enumeration() {
        let a = phi(1, &[&[1], &[2]]);
        assert_eq!(walls(&a).unwrap(), vec![Wall { normal: vec![1] }]);

        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let got: Vec<Vec<i64>> = walls(&b).unwrap().into_iter().map(|w| w.normal).collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);

        let c = phi(2, &[&[1, 0], &[2, 0], &[0, 1]]);
        assert_eq!(walls(&c).unwrap().len(), 2);

        let nospan = phi(2, &[&[1, 0], &[2, 0]]);
        assert_eq!(walls(&nospan), Err(Error::NotSpanning));
    }

    #[test]
    fn regular_and_generic() {
        let a = phi(1, &[&[1], &[2]]);
        assert!(is_regular(&a, &qv(&[rat(1, 2)])).unwrap());
        assert!(!is_regular(&a, &qv(&[rat_int(7)])).unwrap());
        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(!is_regular(&b, &qv(&[rat(1, 3), rat(1, 3)])).unwrap());
        assert!(is_generic(&a, &qv(&[rat_int(1)])).unwrap());
        assert!(!is_generic(&b, &qv(&[rat_int(1), rat_int(1)])).unwrap());
        assert!(is_generic(&b, &qv(&[rat_int(2), rat_int(1)])).unwrap());
    }

    #[test]
    fn alcove_identification() {
        let a = phi(1, &[&[1], &[2]]);
        let alc = alcove_of(&a, &qv(&[rat(3, 2)])).unwrap();
        assert_eq!(alc.slabs[&vec![1]], BigInt::from(1));
        let alc0 = alcove_of(&a, &qv(&[rat(1, 4)])).unwrap();
        assert_eq!(alc0.slabs[&vec![1]], BigInt::from(0));

        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let alc2 = alcove_of(&b, &qv(&[rat(1, 4), rat(1, 2)])).unwrap();
        assert_eq!(alc2.slabs[&vec![1, 0]], BigInt::from(0));
        assert_eq!(alc2.slabs[&vec![0, 1]], BigInt::from(0));
        assert_eq!(alc2.slabs[&vec![1, -1]], BigInt::from(-1));

        assert_eq!(alcove_of(&a, &qv(&[rat_int(1)])), Err(Error::NotRegular));
    }

    #[test]
    fn crossings_and_limits() {
        let a = phi(1, &[&[1], &[2]]);
        let t = first_crossing(&a, &qv(&[rat_int(0)]), &qv(&[rat_int(1)])).unwrap();
        assert_eq!(t, Some(rat_int(1)));
        let t2 = first_crossing(&a, &qv(&[rat(1, 2)]), &qv(&[rat_int(-1)])).unwrap();
        assert_eq!(t2, Some(rat(1, 2)));

        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let t3 = first_crossing(&b, &qv(&[rat_int(0), rat_int(0)]), &qv(&[rat_int(2), rat_int(1)]))
            .unwrap();
        assert_eq!(t3, Some(rat(1, 2)));
        let lp = limit_point(&b, &qv(&[rat_int(0), rat_int(0)]), &qv(&[rat_int(2), rat_int(1)]))
            .unwrap();
        assert_eq!(lp, qv(&[rat(1, 2), rat(1, 4)]));

        let lp1 = limit_point(&a, &qv(&[rat_int(2)]), &qv(&[rat_int(-1)])).unwrap();
        assert_eq!(lp1, qv(&[rat(3, 2)]));
    }

    #[test]
    fn seeded_generic_direction() {
        let a = phi(1, &[&[1], &[2]]);
        let zero = Representation::zero(&a);
        let eps = generic_direction(&a, 7, Some(&zero)).unwrap();
        assert!(eps.coords[0].is_positive());

        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let eps2 = generic_direction(&b, 3, None).unwrap();
        assert!(is_generic(&b, &eps2).unwrap());

        let sym = phi(1, &[&[1], &[-1]]);
        let eps3 = generic_direction(&sym, 11, Some(&Representation::zero(&sym))).unwrap();
        assert!(!eps3.coords[0].is_zero());
    }
}
