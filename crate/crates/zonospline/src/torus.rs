//! Points of the torus T = U / 2 pi Gamma with rational angle, their
//! characters, the sublists Φ(s), and the finite vertex set 𝒱 of points
//! whose sublist still spans.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;

use crate::cyclotomic::Cyc;
use crate::directions::{rank_of, DirectionList};
use crate::rat::{Rat, RationalVector};
use crate::snf::smith_normal_form;
use crate::Result;

/// A point s of the torus with rational angle vector u in [0,1)^d, acting
/// on the lattice by `s^lambda = e^{2 pi i u . lambda}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    angle: Vec<Rat>,
}

impl TorusPoint {
    pub fn new(angle: Vec<Rat>) -> Self {
        TorusPoint {
            angle: angle.into_iter().map(reduce_mod_one).collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        TorusPoint { angle: vec![Rat::zero(); dim] }
    }

    pub fn angle(&self) -> &[Rat] {
        &self.angle
    }

    pub fn is_identity(&self) -> bool {
        self.angle.iter().all(|a| a.is_zero())
    }

    pub fn inverse(&self) -> TorusPoint {
        TorusPoint::new(self.angle.iter().map(|a| -a).collect())
    }

    /// The fractional angle `u . lambda mod 1` of the character value.
    pub fn pairing(&self, lambda: &[i64]) -> Rat {
        let raw: Rat = self
            .angle
            .iter()
            .zip(lambda)
            .map(|(a, &l)| a * Rat::from_integer(l.into()))
            .sum();
        reduce_mod_one(raw)
    }
}

fn reduce_mod_one(r: Rat) -> Rat {
    let f = BigRational::from_integer(r.floor().to_integer());
    r - f
}

/// The exact root of unity `s^lambda`.
pub fn character(s: &TorusPoint, lambda: &[i64]) -> Cyc {
    Cyc::root_of_unity(&s.pairing(lambda))
}

/// The sublist Φ(s) = {α in Φ : s^α = 1}, together with the kept indices.
pub fn phi_s_indices(phi: &DirectionList, s: &TorusPoint) -> Vec<usize> {
    (0..phi.len())
        .filter(|&k| s.pairing(&phi.vectors[k]).is_zero())
        .collect()
}

/// The sublist Φ(s) as a direction list (possibly empty or non-spanning;
/// callers that need spanning must check).
pub fn phi_s(phi: &DirectionList, s: &TorusPoint) -> Result<DirectionList> {
    let keep = phi_s_indices(phi, s);
    phi.sublist(&keep)
}

/// The vertex set 𝒱: all torus points s with Φ(s) spanning. Enumerated per
/// rank-d subset of Φ by Smith normal form, then deduplicated.
pub fn vertex_set(phi: &DirectionList) -> Result<Vec<TorusPoint>> {
    phi.require_spans()?;
    let d = phi.dim;
    let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for subset in index_combinations(phi.len(), d) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&k| phi.vectors[k].clone()).collect();
        if rank_of(&rows, d) != d {
            continue;
        }
        // solutions of A u = 0 mod Z^d: with S = P A Q, u = Q (k_i / s_i)
        let snf = smith_normal_form(&rows);
        let mut index = vec![BigInt::zero(); d];
        loop {
            let w: Vec<Rat> = (0..d)
                .map(|i| Rat::new(index[i].clone(), snf.diag[i].clone()))
                .collect();
            let u: Vec<Rat> = (0..d)
                .map(|i| {
                    let raw: Rat = (0..d)
                        .map(|j| Rat::from_integer(snf.q[i][j].clone()) * &w[j])
                        .sum();
                    reduce_mod_one(raw)
                })
                .collect();
            let s = TorusPoint::new(u.clone());
            let keep = phi_s_indices(phi, &s);
            let sub: Vec<Vec<i64>> = keep.iter().map(|&k| phi.vectors[k].clone()).collect();
            if rank_of(&sub, d) == d {
                found.insert(s.angle.clone());
            }
            // advance the mixed-radix counter over the diagonal moduli
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                index[i] += 1;
                if index[i] < snf.diag[i] {
                    break;
                }
                index[i] = BigInt::zero();
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    Ok(found.into_iter().map(|angle| TorusPoint { angle }).collect())
}

fn index_combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
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

/// True iff every spanning d-subset of Φ has determinant +-1; then the
/// vertex set is trivial.
pub fn is_unimodular(phi: &DirectionList) -> Result<bool> {
    Ok(vertex_set(phi)?.len() == 1)
}

/// A deep-enough witness of s as a RationalVector (used by callers that
/// need the raw angle arithmetic).
pub fn angle_vector(s: &TorusPoint) -> RationalVector {
    RationalVector::new(s.angle.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
        DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn characters() {
        let s = TorusPoint::new(vec![rat(1, 2)]);
        assert_eq!(character(&s, &[3]), Cyc::from_rat(rat(-1, 1)));
        let id = TorusPoint::identity(2);
        assert_eq!(character(&id, &[5, -7]), Cyc::one());
        let s2 = TorusPoint::new(vec![rat(1, 3), rat(0, 1)]);
        assert_eq!(character(&s2, &[2, 5]), Cyc::root_of_unity(&rat(2, 3)));
    }

    #[test]
    fn sublists() {
        let a = phi(1, &[&[1], &[2]]);
        let s = TorusPoint::new(vec![rat(1, 2)]);
        let keep = phi_s_indices(&a, &s);
        assert_eq!(keep, vec![1]);
        let id = TorusPoint::identity(1);
        assert_eq!(phi_s_indices(&a, &id), vec![0, 1]);

        let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let s2 = TorusPoint::new(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(phi_s_indices(&b, &s2), vec![2]);
        assert!(!phi_s(&b, &s2).unwrap().spans);
    }

    #[test]
    fn vertex_sets_of_fixtures() {
        let a = phi(1, &[&[1], &[2]]);
        let va = vertex_set(&a).unwrap();
        assert_eq!(
            va.iter().map(|s| s.angle.to_vec()).collect::<Vec<_>>(),
            vec![vec![rat(0, 1)], vec![rat(1, 2)]]
        );

        let tent = phi(1, &[&[1], &[-1]]);
        assert_eq!(vertex_set(&tent).unwrap().len(), 1);

        let hex = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let vh = vertex_set(&hex).unwrap();
        assert_eq!(vh.len(), 1);
        assert!(vh[0].is_identity());
        assert!(is_unimodular(&hex).unwrap());

        let c = phi(1, &[&[1], &[1], &[2]]);
        assert_eq!(vertex_set(&c).unwrap().len(), 2);

        let quad = phi(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]);
        let vq = vertex_set(&quad).unwrap();
        assert_eq!(vq.len(), 2);
        assert_eq!(vq[1].angle(), &[rat(0, 1), rat(1, 2)]);
    }

    #[test]
    fn vertex_set_closed_under_inverse() {
        let phi3 = phi(1, &[&[1], &[3]]);
        let vs = vertex_set(&phi3).unwrap();
        assert_eq!(vs.len(), 3);
        for s in &vs {
            let inv = s.inverse();
            assert!(vs.iter().any(|t| *t == inv));
        }
    }
}
