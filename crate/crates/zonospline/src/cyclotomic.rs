//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! Characters of torus points are roots of unity with rational angle, and
//! the Todd-operator coefficients at a nontrivial vertex live in the field
//! they generate. Representing them exactly keeps the whole `y = 0`
//! deconvolution path free of floating point: the recovered values collapse
//! back to rational complex numbers and are compared with zero tolerance.
//!
//! An element is stored as a rational coefficient vector over the power
//! basis `1, zeta, ..., zeta^(phi(n)-1)` of Q(zeta_n) = Q[x]/Phi_n(x).
//! Mixed-order arithmetic lifts both operands to the lcm of their orders.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use crate::rat::{rat_to_f64, QComplex, Rat};

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first,
/// monic. Computed by dividing x^n - 1 by the cyclotomic polynomials of the
/// proper divisors; cached process-wide.
fn cyclotomic_poly(n: u32) -> Vec<Rat> {
    static CACHE: Lazy<Mutex<HashMap<u32, Vec<Rat>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(p) = CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![-Rat::one(), Rat::one()]
    } else {
        // x^n - 1
        let mut num = vec![Rat::zero(); n as usize + 1];
        num[0] = -Rat::one();
        num[n as usize] = Rat::one();
        for d in 1..n {
            if n % d == 0 {
                num = poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    CACHE.lock().unwrap().insert(n, poly.clone());
    poly
}

fn poly_trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of polynomials over Q; the remainder must vanish.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let (q, r) = poly_divmod(num, den);
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![Rat::zero()], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = &rem[i] / &lead;
        if !c.is_zero() {
            for j in 0..=dd {
                let v = &den[j] * &c;
                rem[i - dd + j] = &rem[i - dd + j] - &v;
            }
        }
        quot[i - dd] = c;
    }
    rem.truncate(dd.max(1));
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] = &out[i + j] + &(ai * bj);
            }
        }
    }
    out
}

/// Extended gcd over Q[x]: returns (g, u) with u*a = g mod m and g the
/// monic gcd of a and m. Used for inverses modulo the cyclotomic polynomial.
fn poly_half_ext_gcd(a: &[Rat], m: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0 = vec![Rat::zero()];
    let mut u1 = vec![Rat::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let qu = poly_mul(&q, &u1);
        let mut nu = u0.clone();
        nu.resize(nu.len().max(qu.len()), Rat::zero());
        for (i, c) in qu.iter().enumerate() {
            nu[i] = &nu[i] - c;
        }
        poly_trim(&mut nu);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
    }
    // normalize gcd monic
    let lead = r0.last().unwrap().clone();
    if !lead.is_one() {
        for c in r0.iter_mut() {
            *c = &*c / &lead;
        }
        for c in u0.iter_mut() {
            *c = &*c / &lead;
        }
    }
    (r0, u0)
}

fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An element of Q(zeta_n). `order` is n; `coeffs` has length phi(n).
#[derive(Debug, Clone)]
pub struct Cyc {
    order: u32,
    coeffs: Vec<Rat>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc { order: 1, coeffs: vec![Rat::zero()] }
    }

    pub fn one() -> Self {
        Cyc { order: 1, coeffs: vec![Rat::one()] }
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyc { order: 1, coeffs: vec![r] }
    }

    pub fn from_qcomplex(z: &QComplex) -> Self {
        // re + im * zeta_4
        let re = Cyc::from_rat(z.re.clone());
        let im = Cyc { order: 4, coeffs: vec![Rat::zero(), z.im.clone()] };
        &re + &im
    }

    /// The root of unity e^{2 pi i angle} for a rational angle.
    pub fn root_of_unity(angle: &Rat) -> Self {
        let mut a = angle.clone();
        let one = Rat::one();
        a -= BigRational::from_integer(a.floor().to_integer());
        debug_assert!(a >= Rat::zero() && a < one);
        let q: u32 = a.denom().try_into().expect("angle denominator too large");
        let p: u32 = a.numer().try_into().expect("angle numerator out of range");
        let deg = euler_phi(q) as usize;
        let mut raw = vec![Rat::zero(); (p as usize) + 1];
        raw[p as usize] = Rat::one();
        Cyc { order: q, coeffs: raw }.reduced(deg)
    }

    fn reduced(mut self, _deg_hint: usize) -> Self {
        let modulus = cyclotomic_poly(self.order);
        let deg = modulus.len() - 1;
        if self.coeffs.len() > deg {
            let (_, r) = poly_divmod(&self.coeffs, &modulus);
            self.coeffs = r;
        }
        self.coeffs.resize(deg.max(1), Rat::zero());
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rewrites the element in Q(zeta_m) for an order m divisible by the
    /// current one: zeta_n = zeta_m^(m/n).
    fn lift(&self, m: u32) -> Cyc {
        if m == self.order {
            return self.clone();
        }
        debug_assert!(m % self.order == 0);
        let step = (m / self.order) as usize;
        let deg_m = euler_phi(m) as usize;
        let mut raw = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * step] = &raw[i * step] + c;
            }
        }
        Cyc { order: m, coeffs: raw }.reduced(deg_m)
    }

    fn common(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    pub fn inverse(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        let modulus = cyclotomic_poly(self.order);
        let (g, u) = poly_half_ext_gcd(&self.coeffs, &modulus);
        // Phi_n is irreducible over Q, so the gcd of a nonzero element is 1.
        debug_assert!(g.len() == 1 && g[0].is_one());
        let deg = modulus.len() - 1;
        Some(Cyc { order: self.order, coeffs: u }.reduced(deg))
    }

    /// Complex conjugation, the automorphism zeta -> zeta^(n-1).
    pub fn conj(&self) -> Cyc {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let deg = euler_phi(self.order) as usize;
        let mut raw = vec![Rat::zero(); (deg - 1) * (n - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = (i * (n - 1)) % n;
                raw[k] = &raw[k] + c;
            }
        }
        Cyc { order: self.order, coeffs: raw }.reduced(deg)
    }

    /// Exact rational value, if the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Exact rational real and imaginary parts, if the element lies in Q(i).
    pub fn as_qcomplex(&self) -> Option<QComplex> {
        let z = self.lift(self.order.lcm(&4));
        let zbar = z.conj();
        let two = Cyc::from_rat(Rat::from_integer(2.into()));
        let re = &(&z + &zbar) * &two.inverse().unwrap();
        let i = Cyc { order: 4, coeffs: vec![Rat::zero(), Rat::one()] };
        let two_i = &two * &i;
        let im = &(&z - &zbar) * &two_i.inverse().unwrap();
        Some(QComplex::new(re.as_rat()?, im.as_rat()?))
    }

    pub fn to_complex64(&self) -> Complex64 {
        let n = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let theta = TAU * (k as f64) / n;
                acc += rat_to_f64(c) * Complex64::new(theta.cos(), theta.sin());
            }
        }
        acc
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyc::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Add for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = &*x + y;
        }
        a
    }
}

impl Sub for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = &*x - y;
        }
        a
    }
}

impl Mul for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, rhs);
        let deg = euler_phi(a.order) as usize;
        let raw = poly_mul(&a.coeffs, &b.coeffs);
        Cyc { order: a.order, coeffs: raw }.reduced(deg)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn cyclotomic_polys() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1
        let c = |v: &[i64]| v.iter().map(|&x| Rat::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(cyclotomic_poly(2), c(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), c(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), c(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12).len(), 5);
    }

    #[test]
    fn roots_of_unity() {
        let minus_one = Cyc::root_of_unity(&rat(1, 2));
        assert_eq!(minus_one, Cyc::from_rat(rat(-1, 1)));
        let i = Cyc::root_of_unity(&rat(1, 4));
        assert_eq!(&i * &i, Cyc::from_rat(rat(-1, 1)));
        let z3 = Cyc::root_of_unity(&rat(1, 3));
        let z3sq = &z3 * &z3;
        // 1 + z + z^2 = 0 for the primitive cube root
        let sum = &(&Cyc::one() + &z3) + &z3sq;
        assert!(sum.is_zero());
    }

    #[test]
    fn inverse_and_conj() {
        let z = Cyc::root_of_unity(&rat(1, 3));
        let w = &z - &Cyc::one(); // zeta_3 - 1, nonzero
        let winv = w.inverse().unwrap();
        assert_eq!(&w * &winv, Cyc::one());
        assert_eq!(&z.conj() * &z, Cyc::one());
    }

    #[test]
    fn gaussian_extraction() {
        let z = Cyc::from_qcomplex(&QComplex::new(rat(1, 3), rat(-2, 5)));
        assert_eq!(z.as_qcomplex().unwrap(), QComplex::new(rat(1, 3), rat(-2, 5)));
        // an element genuinely outside Q(i)
        let z3 = Cyc::root_of_unity(&rat(1, 3));
        assert!(z3.as_qcomplex().is_none());
    }

    #[test]
    fn mixed_order_arithmetic() {
        let a = Cyc::root_of_unity(&rat(1, 2));
        let b = Cyc::root_of_unity(&rat(1, 3));
        let p = &a * &b; // e^{2 pi i (5/6)}
        assert_eq!(p, Cyc::root_of_unity(&rat(5, 6)));
        let c = p.to_complex64();
        assert!((c.re - (TAU * 5.0 / 6.0).cos()).abs() < 1e-12);
    }
}
