//! Arbitrary-precision rationals, rational vectors and rational complex
//! numbers. Nothing in the exact path ever rounds.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serializes a rational as `p/q`, or just `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, plain integers, and decimal literals (`-0.25` is `-1/4`).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rat::new(num, den);
        let int_part = Rat::from_integer(int);
        return Ok(if neg { int_part - frac_part } else { int_part + frac_part });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(p))
}

/// A point or direction of V with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    pub coords: Vec<Rat>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![Rat::zero(); dim] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self { coords: v.iter().map(|&x| rat_int(x)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Exact inner product with an integer vector.
    pub fn dot_int(&self, n: &[i64]) -> Rat {
        self.coords
            .iter()
            .zip(n)
            .map(|(c, &k)| c * Rat::from_integer(BigInt::from(k)))
            .sum()
    }

    pub fn dot(&self, other: &RationalVector) -> Rat {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, t: &Rat) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|c| c * t).collect())
    }

    pub fn add_scaled(&self, t: &Rat, dir: &RationalVector) -> RationalVector {
        RationalVector::new(
            self.coords
                .iter()
                .zip(&dir.coords)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    pub fn add_int(&self, v: &[i64]) -> RationalVector {
        RationalVector::new(
            self.coords
                .iter()
                .zip(v)
                .map(|(a, &b)| a + rat_int(b))
                .collect(),
        )
    }

    pub fn sub_int(&self, v: &[i64]) -> RationalVector {
        RationalVector::new(
            self.coords
                .iter()
                .zip(v)
                .map(|(a, &b)| a - rat_int(b))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rat_to_f64).collect()
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector::new(
            self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector::new(
            self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(c))?;
        }
        write!(f, ")")
    }
}

/// A rational complex number `re + im*i`; the value type of exactly
/// recovered lattice functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QComplex {
    pub re: Rat,
    pub im: Rat,
}

impl QComplex {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        Self { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        Self { re: Rat::one(), im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Serializes as `re,im` with each part in `p/q` form.
    pub fn format(&self) -> String {
        format!("{},{}", format_rat(&self.re), format_rat(&self.im))
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s.split_once(',') {
            Some((re, im)) => Ok(Self::new(parse_rat(re)?, parse_rat(im)?)),
            None => Ok(Self::from_rat(parse_rat(s)?)),
        }
    }
}

impl Add for &QComplex {
    type Output = QComplex;
    fn add(self, rhs: &QComplex) -> QComplex {
        QComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &QComplex {
    type Output = QComplex;
    fn sub(self, rhs: &QComplex) -> QComplex {
        QComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &QComplex {
    type Output = QComplex;
    fn mul(self, rhs: &QComplex) -> QComplex {
        QComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &QComplex {
    type Output = QComplex;
    fn neg(self) -> QComplex {
        QComplex::new(-&self.re, -&self.im)
    }
}

/// Floor of a rational, as a rational.
pub fn rat_floor(r: &Rat) -> Rat {
    Rat::from_integer(r.floor().to_integer())
}

/// Smallest `t > 0` with `a + t*s` an integer, for exact rational `a` and
/// nonzero rational `s`.
pub fn next_integer_hit(a: &Rat, s: &Rat) -> Rat {
    debug_assert!(!s.is_zero());
    let f = rat_floor(a);
    let target = if s.is_positive() {
        // strictly next integer above a (floor + 1 covers the integer case too)
        f + Rat::one()
    } else if &f == a {
        f - Rat::one()
    } else {
        f
    };
    (&target - a) / s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(format_rat(&parse_rat("3/2").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("-6/4").unwrap()), "-3/2");
        assert_eq!(format_rat(&parse_rat("7").unwrap()), "7");
        assert_eq!(format_rat(&parse_rat("0.25").unwrap()), "1/4");
        assert_eq!(format_rat(&parse_rat("-0.5").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn next_hit() {
        assert_eq!(next_integer_hit(&rat_int(0), &rat_int(1)), rat_int(1));
        assert_eq!(next_integer_hit(&rat(1, 2), &rat_int(-1)), rat(1, 2));
        assert_eq!(next_integer_hit(&rat(1, 2), &rat_int(2)), rat(1, 4));
        assert_eq!(next_integer_hit(&rat_int(3), &rat_int(-2)), rat(1, 2));
    }

    #[test]
    fn qcomplex_roundtrip() {
        let z = QComplex::new(rat(1, 3), rat(-2, 7));
        assert_eq!(QComplex::parse(&z.format()).unwrap(), z);
        let w = QComplex::parse("5").unwrap();
        assert_eq!(w, QComplex::from_rat(rat_int(5)));
    }
}
