//! Multivariate polynomials over an abstract coefficient ring, plus the
//! exact univariate interpolation and integration used by the box-spline
//! recursion. The same code runs over rationals (parameter-free local
//! pieces), cyclotomic numbers (operator-applied pieces at a torus vertex)
//! and complex doubles (the numeric path).

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::cyclotomic::Cyc;
use crate::rat::{rat_to_f64, Rat};

/// The coefficient operations every scalar of the library supports.
pub trait Ring: Clone + PartialEq + Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Ring for Rat {
    fn ring_zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn ring_one() -> Self {
        <Rat as One>::one()
    }
    fn is_ring_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn inv(&self) -> Option<Self> {
        if <Rat as Zero>::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Ring for Cyc {
    fn ring_zero() -> Self {
        Cyc::zero()
    }
    fn ring_one() -> Self {
        Cyc::one()
    }
    fn is_ring_zero(&self) -> bool {
        Cyc::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        Cyc::from_rat(r.clone())
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

impl Ring for Complex64 {
    fn ring_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn ring_one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_ring_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

/// A polynomial in `vars` variables; terms keyed by exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Ring> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Ring> Poly<T> {
    pub fn zero(vars: usize) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: T) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_ring_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn monomial(vars: usize, exps: Vec<u32>, c: T) -> Self {
        debug_assert_eq!(exps.len(), vars);
        let mut p = Poly::zero(vars);
        if !c.is_ring_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: T) {
        if c.is_ring_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = v.add_ref(&c);
                if v.is_ring_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_ring_zero() {
            return Poly::zero(self.vars);
        }
        let mut out = Poly::zero(self.vars);
        for (e, v) in &self.terms {
            out.insert_add(e.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.vars, other.vars);
        let mut out = Poly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn eval(&self, point: &[T]) -> T {
        debug_assert_eq!(point.len(), self.vars);
        let mut acc = T::ring_zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (j, &m) in e.iter().enumerate() {
                for _ in 0..m {
                    term = term.mul_ref(&point[j]);
                }
            }
            acc = acc.add_ref(&term);
        }
        acc
    }

    pub fn eval_rat(&self, point: &[Rat]) -> T {
        let pt: Vec<T> = point.iter().map(|r| T::from_rat(r)).collect();
        self.eval(&pt)
    }

    /// Partial derivative with respect to variable `j`.
    pub fn diff(&self, j: usize) -> Self {
        let mut out = Poly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[j] -= 1;
            let factor = T::from_rat(&Rat::from_integer((e[j] as i64).into()));
            out.insert_add(ne, c.mul_ref(&factor));
        }
        out
    }

    /// Directional derivative along a rational vector.
    pub fn dir_diff(&self, dir: &[Rat]) -> Self {
        let mut out = Poly::zero(self.vars);
        for (j, dj) in dir.iter().enumerate() {
            if dj.is_ring_zero() {
                continue;
            }
            out = out.add(&self.diff(j).scale(&T::from_rat(dj)));
        }
        out
    }

    /// The polynomial v -> p(v + delta).
    pub fn shifted(&self, delta: &[Rat]) -> Self {
        debug_assert_eq!(delta.len(), self.vars);
        let mut cur = self.clone();
        for (j, dj) in delta.iter().enumerate() {
            if dj.is_ring_zero() {
                continue;
            }
            let d = T::from_rat(dj);
            let mut next = Poly::zero(self.vars);
            for (e, c) in &cur.terms {
                let m = e[j];
                // x^m -> (x + d)^m
                let mut binom = T::ring_one();
                let mut dpow = T::ring_one();
                for i in (0..=m).rev() {
                    // coefficient C(m, i) d^(m-i) for x^i, built highest power first
                    let mut ne = e.clone();
                    ne[j] = i;
                    next.insert_add(ne, c.mul_ref(&binom).mul_ref(&dpow));
                    if i > 0 {
                        let num = Rat::from_integer((i as i64).into());
                        let den = Rat::from_integer(((m - i + 1) as i64).into());
                        binom = binom
                            .mul_ref(&T::from_rat(&num))
                            .mul_ref(&T::from_rat(&den).inv().unwrap());
                        dpow = dpow.mul_ref(&d);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    pub fn map_coeffs<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        let mut out = Poly::zero(self.vars);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), f(c));
        }
        out
    }
}

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// `< nodes.len()` through the given values, by exact Lagrange interpolation.
pub fn interp_univariate<T: Ring>(nodes: &[Rat], values: &[T]) -> Vec<T> {
    let n = nodes.len();
    debug_assert_eq!(values.len(), n);
    let mut coeffs = vec![T::ring_zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![T::ring_zero(); n];
        basis[0] = T::ring_one();
        let mut deg = 0usize;
        let mut denom = T::ring_one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let xj = T::from_rat(&nodes[j]);
            // multiply by (x - x_j): basis[k] <- basis[k-1] - x_j basis[k]
            for k in (0..=deg + 1).rev() {
                let prev = if k == 0 { T::ring_zero() } else { basis[k - 1].clone() };
                let cur = basis[k].mul_ref(&xj);
                basis[k] = prev.sub_ref(&cur);
            }
            deg += 1;
            denom = denom.mul_ref(&T::from_rat(&(&nodes[i] - &nodes[j])));
        }
        let scale = values[i].mul_ref(&denom.inv().expect("distinct interpolation nodes"));
        for k in 0..n {
            coeffs[k] = coeffs[k].add_ref(&basis[k].mul_ref(&scale));
        }
    }
    coeffs
}

/// Integral over [a, b] of the univariate polynomial with the given
/// coefficients (lowest degree first).
pub fn integrate_univariate<T: Ring>(coeffs: &[T], a: &Rat, b: &Rat) -> T {
    let mut acc = T::ring_zero();
    let mut apow = a.clone();
    let mut bpow = b.clone();
    for (m, c) in coeffs.iter().enumerate() {
        let div = Rat::from_integer(((m + 1) as i64).into());
        let w = (&bpow - &apow) / div;
        acc = acc.add_ref(&c.mul_ref(&T::from_rat(&w)));
        apow *= a;
        bpow *= b;
    }
    acc
}

/// Interpolates a function on a tensor-product grid into a polynomial whose
/// per-variable degree is `axis_nodes[j].len() - 1`.
pub fn interp_tensor<T: Ring>(
    axis_nodes: &[Vec<Rat>],
    mut value_at: impl FnMut(&[Rat]) -> T,
) -> Poly<T> {
    let d = axis_nodes.len();
    let sizes: Vec<usize> = axis_nodes.iter().map(|v| v.len()).collect();
    // 1-D Lagrange basis per axis, as polynomials in variable j
    let mut bases: Vec<Vec<Poly<T>>> = Vec::with_capacity(d);
    for (j, nodes) in axis_nodes.iter().enumerate() {
        let mut axis = Vec::with_capacity(nodes.len());
        for i in 0..nodes.len() {
            let mut unit = vec![T::ring_zero(); nodes.len()];
            unit[i] = T::ring_one();
            let coeffs = interp_univariate(nodes, &unit);
            let mut p = Poly::zero(d);
            for (m, c) in coeffs.into_iter().enumerate() {
                let mut e = vec![0u32; d];
                e[j] = m as u32;
                p = p.add(&Poly::monomial(d, e, c));
            }
            axis.push(p);
        }
        bases.push(axis);
    }
    let mut out = Poly::zero(d);
    let mut index = vec![0usize; d];
    loop {
        let point: Vec<Rat> = index
            .iter()
            .enumerate()
            .map(|(j, &i)| axis_nodes[j][i].clone())
            .collect();
        let v = value_at(&point);
        if !v.is_ring_zero() {
            let mut basis = Poly::constant(d, v);
            for j in 0..d {
                basis = basis.mul(&bases[j][index[j]]);
            }
            out = out.add(&basis);
        }
        // advance the multi-index
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            index[j] += 1;
            if index[j] < sizes[j] {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn p_of(vars: usize, terms: &[(&[u32], i64)]) -> Poly<Rat> {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            p = p.add(&Poly::monomial(vars, e.to_vec(), rat_int(*c)));
        }
        p
    }

    #[test]
    fn arithmetic_and_eval() {
        // p = x^2 y + 3
        let p = p_of(2, &[(&[2, 1], 1), (&[0, 0], 3)]);
        assert_eq!(p.eval_rat(&[rat_int(2), rat_int(5)]), rat_int(23));
        assert_eq!(p.total_degree(), 3);
        let q = p.mul(&p);
        assert_eq!(q.eval_rat(&[rat_int(2), rat_int(5)]), rat_int(529));
    }

    #[test]
    fn derivative_and_shift() {
        // p = x^3
        let p = p_of(1, &[(&[3], 1)]);
        let dp = p.dir_diff(&[rat_int(2)]); // 2 d/dx -> 6 x^2
        assert_eq!(dp.eval_rat(&[rat_int(3)]), rat_int(54));
        // p(x + 1) = x^3 + 3x^2 + 3x + 1
        let s = p.shifted(&[rat_int(1)]);
        assert_eq!(s.eval_rat(&[rat_int(0)]), rat_int(1));
        assert_eq!(s.eval_rat(&[rat_int(2)]), rat_int(27));
    }

    #[test]
    fn univariate_interp_exact() {
        // recover 1/2 - t/3 + t^2 from three nodes
        let f = |t: &Rat| rat(1, 2) - t * rat(1, 3) + t * t;
        let nodes = vec![rat(1, 4), rat(1, 2), rat(3, 4)];
        let values: Vec<Rat> = nodes.iter().map(f).collect();
        let c = interp_univariate(&nodes, &values);
        assert_eq!(c, vec![rat(1, 2), rat(-1, 3), rat_int(1)]);
        // integral over [0,1]: 1/2 - 1/6 + 1/3 = 2/3
        assert_eq!(integrate_univariate(&c, &rat_int(0), &rat_int(1)), rat(2, 3));
    }

    #[test]
    fn tensor_interp_recovers_polynomial() {
        let target = p_of(2, &[(&[1, 1], 2), (&[0, 1], -1), (&[0, 0], 5)]);
        let axes = vec![vec![rat(1, 3), rat(2, 3)], vec![rat(-1, 5), rat(1, 5)]];
        let got = interp_tensor(&axes, |pt| target.eval_rat(pt));
        assert_eq!(got, target);
    }
}
