//! Gauss-Legendre quadrature nodes and the numeric extraction of local
//! Taylor polynomials from analytic samplers. Only the parametric
//! (`y != 0`) path comes through here; the exact path never touches
//! floating point.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

use crate::poly::Poly;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence and cached.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: Lazy<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    CACHE
        .lock()
        .unwrap()
        .insert(n, (nodes.clone(), weights.clone()));
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrates a complex integrand over [a, b] with the n-point rule.
pub fn integrate_complex(
    a: f64,
    b: f64,
    n: usize,
    mut f: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Fits an analytic sampler on the box `anchor +/- half_width` by Chebyshev
/// tensor interpolation at two grid scales, in box-scaled coordinates
/// (`u = (v - anchor) / half_width`, so the polynomials live on [-1, 1]^d
/// and the interpolation is well conditioned regardless of the box size).
/// The fine fit covers half the box, i.e. |u| <= 1/2. Callers compare the
/// two fits at their own evaluation point, so the consistency estimate
/// includes whatever extrapolation the evaluation performs.
pub fn fit_local_pair(
    sampler: &dyn Fn(&[f64]) -> Complex64,
    anchor: &[f64],
    half_width: f64,
    degree: usize,
) -> (Poly<Complex64>, Poly<Complex64>) {
    let coarse = fit_once(sampler, anchor, half_width, 1.0, degree);
    let fine = fit_once(sampler, anchor, half_width, 0.5, degree);
    (coarse, fine)
}

/// Single-fit convenience with a fixed-probe error estimate inside the box;
/// the returned polynomial is in box-scaled coordinates.
pub fn fit_local_polynomial(
    sampler: &dyn Fn(&[f64]) -> Complex64,
    anchor: &[f64],
    half_width: f64,
    degree: usize,
) -> (Poly<Complex64>, f64) {
    let (p1, p2) = fit_local_pair(sampler, anchor, half_width, degree);
    let d = anchor.len();
    let mut estimate: f64 = 0.0;
    for k in 0..(1 + 2 * d) {
        let pt: Vec<Complex64> = (0..d)
            .map(|j| {
                let off = if k == 0 {
                    0.0
                } else if (k - 1) / 2 == j {
                    if k % 2 == 1 { 0.4 } else { -0.4 }
                } else {
                    0.17
                };
                Complex64::new(off, 0.0)
            })
            .collect();
        estimate = estimate.max((p1.eval(&pt) - p2.eval(&pt)).norm());
    }
    (p2, estimate)
}

/// Interpolation on scaled Chebyshev nodes `shrink * cos(...)`, sampling at
/// `anchor + half_width * u`.
fn fit_once(
    sampler: &dyn Fn(&[f64]) -> Complex64,
    anchor: &[f64],
    half_width: f64,
    shrink: f64,
    degree: usize,
) -> Poly<Complex64> {
    let d = anchor.len();
    let n = degree + 1;
    let axis: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                0.0
            } else {
                shrink * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos()
            }
        })
        .collect();
    let axis_nodes: Vec<Vec<crate::rat::Rat>> = (0..d)
        .map(|_| axis.iter().map(|&x| f64_to_rat(x)).collect())
        .collect();
    crate::poly::interp_tensor(&axis_nodes, |pt: &[crate::rat::Rat]| {
        let abs: Vec<f64> = pt
            .iter()
            .zip(anchor)
            .map(|(off, a)| a + half_width * crate::rat::rat_to_f64(off))
            .collect();
        sampler(&abs)
    })
}

/// Dyadic rational closest to an f64 (exact: f64 values are dyadic).
pub fn f64_to_rat(x: f64) -> crate::rat::Rat {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // degree 2n-1 exactness: x^7 over [0,1] with 4 nodes
        let v = integrate_complex(0.0, 1.0, 4, |x| Complex64::new(x.powi(7), 0.0));
        assert!((v.re - 0.125).abs() < 1e-14);
        let w = integrate_complex(0.0, 2.0, 16, |x| Complex64::new(0.0, x).exp());
        let exact = (Complex64::new(0.0, 2.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((w - exact).norm() < 1e-13);
    }

    #[test]
    fn taylor_fit_of_exponential() {
        let sampler = |v: &[f64]| (Complex64::new(0.0, 0.3) * v[0]).exp();
        let (p, err) = fit_local_polynomial(&sampler, &[2.0], 0.5, 8);
        assert!(err < 1e-10, "estimate {err}");
        // scaled coordinates: u = 1/2 is the absolute offset 0.25
        let got = p.eval(&[Complex64::new(0.5, 0.0)]);
        let want = (Complex64::new(0.0, 0.3) * 2.25).exp();
        assert!((got - want).norm() < 1e-10);
    }
}
