//! Independent oracles for the derived fixture values. Each oracle computes
//! the quantity from its own definition (cube quadrature, direct series
//! inversion, nested-loop enumeration) without touching the implementation
//! path it checks, and the agreed values are frozen in the assertions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonospline::boxspline;
use zonospline::directions::{self, DirectionList};
use zonospline::partition;
use zonospline::rat::{rat, rat_to_f64, Rat, RationalVector};
use zonospline::series;

fn phi(dim: usize, vs: &[&[i64]]) -> DirectionList {
    DirectionList::new(dim, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
}

/// Composite Gauss-Legendre nodes on [0,1]: `panels` panels of 8 nodes.
fn composite_nodes(panels: usize) -> Vec<(f64, f64)> {
    // 8-point Gauss-Legendre on [-1,1]
    const X: [f64; 8] = [
        -0.9602898564975363,
        -0.7966664774136267,
        -0.525532409916329,
        -0.18343464249564978,
        0.18343464249564978,
        0.525532409916329,
        0.7966664774136267,
        0.9602898564975363,
    ];
    const W: [f64; 8] = [
        0.10122853629037669,
        0.22238103445337434,
        0.31370664587788705,
        0.36268378337836193,
        0.36268378337836193,
        0.31370664587788705,
        0.22238103445337434,
        0.10122853629037669,
    ];
    let mut out = Vec::with_capacity(panels * 8);
    let width = 1.0 / panels as f64;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (x, w) in X.iter().zip(&W) {
            out.push((mid + 0.5 * width * x, 0.5 * width * w));
        }
    }
    out
}

/// The defining cube integral against a narrow Gaussian: a mollified point
/// value of the box spline in one dimension.
fn mollified_box_spline_1d(alphas: &[i64], v: f64, sigma: f64, panels: usize) -> f64 {
    let nodes = composite_nodes(panels);
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let mut total = 0.0;
    match alphas.len() {
        1 => {
            for (t1, w1) in &nodes {
                let x = t1 * alphas[0] as f64 - v;
                total += w1 * norm * (-0.5 * (x / sigma).powi(2)).exp();
            }
        }
        2 => {
            for (t1, w1) in &nodes {
                for (t2, w2) in &nodes {
                    let x = t1 * alphas[0] as f64 + t2 * alphas[1] as f64 - v;
                    total += w1 * w2 * norm * (-0.5 * (x / sigma).powi(2)).exp();
                }
            }
        }
        3 => {
            for (t1, w1) in &nodes {
                for (t2, w2) in &nodes {
                    for (t3, w3) in &nodes {
                        let x = t1 * alphas[0] as f64
                            + t2 * alphas[1] as f64
                            + t3 * alphas[2] as f64
                            - v;
                        total += w1 * w2 * w3 * norm * (-0.5 * (x / sigma).powi(2)).exp();
                    }
                }
            }
        }
        _ => panic!("oracle handles up to three directions"),
    }
    total
}

#[test]
fn cube_integral_oracle_decides_the_tent_table() {
    // The published table for [omega, -omega] lists "t - 1" on 0 < t < 1;
    // the defining integral gives the tent 1 - |t|. The oracle decides.
    let oracle = mollified_box_spline_1d(&[1, -1], -0.5, 0.01, 60);
    assert!((oracle - 0.5).abs() < 5e-3, "oracle value {oracle}");
    let tent = phi(1, &[&[1], &[-1]]);
    let exact = boxspline::eval_exact(&tent, &RationalVector::new(vec![rat(-1, 2)])).unwrap();
    assert_eq!(exact, rat(1, 2));
    let plus_side = mollified_box_spline_1d(&[1, -1], 0.5, 0.01, 60);
    assert!((plus_side - 0.5).abs() < 5e-3);
}

#[test]
fn cube_integral_oracle_matches_exact_values() {
    let cases: Vec<(&[i64], f64, Rat)> = vec![
        (&[1], 0.5, rat(1, 1)),
        (&[1, 2], 0.5, rat(1, 4)),
        (&[1, 2], 1.5, rat(1, 2)),
        (&[1, 2], 2.75, rat(1, 8)),
        (&[1, 1, 2], 1.5, rat(7, 16)),
    ];
    for (alphas, v, want) in cases {
        let oracle = mollified_box_spline_1d(alphas, v, 0.01, 60);
        assert!(
            (oracle - rat_to_f64(&want)).abs() < 5e-3,
            "oracle {oracle} vs {want} for {alphas:?} at {v}"
        );
        let list = phi(1, &alphas.iter().map(std::slice::from_ref).collect::<Vec<_>>());
        let vr = RationalVector::new(vec![zonospline::quad::f64_to_rat(v)]);
        let exact = boxspline::eval_exact(&list, &vr).unwrap();
        assert_eq!(exact, want);
    }
}

#[test]
fn cone_integral_oracle_for_the_multispline() {
    // T([1,2])(v) is the v-derivative of the cone volume
    // vol{t >= 0 : t1 + 2 t2 <= v}; the mollified defining integral over a
    // large box gives the density directly.
    let nodes = composite_nodes(120);
    let sigma = 0.01;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let big = 4.0; // support cut-off: t1 <= 4, 2 t2 <= 4 covers v = 1/2
    let mut oracle = 0.0;
    for (t1, w1) in &nodes {
        for (t2, w2) in &nodes {
            let x = big * t1 + 2.0 * big * t2 - 0.5;
            oracle += big * w1 * big * w2 * norm * (-0.5 * (x / sigma).powi(2)).exp();
        }
    }
    assert!((oracle - 0.25).abs() < 5e-3, "oracle {oracle}");
    let a = phi(1, &[&[1], &[2]]);
    let exact = partition::multispline_exact(&a, &RationalVector::new(vec![rat(1, 2)])).unwrap();
    assert_eq!(exact, rat(1, 4));
}

#[test]
fn series_inversion_oracle_for_bernoulli() {
    // invert (e^z - 1)/z = sum z^m / (m+1)! directly
    let order = 8;
    let mut denom = vec![Rat::from_integer(0.into()); order + 1];
    let mut fact = Rat::from_integer(1.into());
    for (m, d) in denom.iter_mut().enumerate() {
        fact *= rat((m + 1) as i64, 1);
        *d = fact.recip(); // coefficient of z^m in (e^z - 1)/z is 1/(m+1)!
    }
    let mut inv = vec![Rat::from_integer(0.into()); order + 1];
    inv[0] = denom[0].recip();
    for l in 1..=order {
        let mut acc = Rat::from_integer(0.into());
        for j in 0..l {
            acc += &inv[j] * &denom[l - j];
        }
        inv[l] = -acc / &denom[0];
    }
    // b(a) = inv[a] * a!
    let bern = series::bernoulli(order);
    let mut fact = Rat::from_integer(1.into());
    for a in 0..=order {
        if a > 0 {
            fact *= rat(a as i64, 1);
        }
        assert_eq!(&inv[a] * &fact, bern[a], "Bernoulli mismatch at {a}");
    }
    assert_eq!(bern[0], rat(1, 1));
    assert_eq!(bern[1], rat(-1, 2));
    assert_eq!(bern[2], rat(1, 6));
    assert_eq!(bern[4], rat(-1, 30));
}

#[test]
fn finite_difference_oracle_for_beta() {
    // beta(1, i) by central differences of 1/(i e^z - 1) at 0
    let u = Complex64::new(0.0, 1.0);
    let f = |z: Complex64| 1.0 / (u * z.exp() - 1.0);
    let h = 1e-5;
    let d = (f(Complex64::new(h, 0.0)) - f(Complex64::new(-h, 0.0))) / (2.0 * h);
    let beta = series::beta_coeffs(u, 1).unwrap();
    assert!((beta[1] - d).norm() < 1e-8, "fd {d} vs beta {}", beta[1]);
    let closed = -u / ((u - 1.0) * (u - 1.0));
    assert!((beta[1] - closed).norm() < 1e-13);
}

#[test]
fn nested_loop_oracle_for_partition_counts() {
    // counts by a plain triple loop, no linear programming involved
    let count_12 = |nu: i64| -> i64 {
        let mut c = 0;
        for p1 in 0..=20 {
            for p2 in 0..=10 {
                if p1 + 2 * p2 == nu {
                    c += 1;
                }
            }
        }
        c
    };
    let a = phi(1, &[&[1], &[2]]);
    for nu in 0..=15 {
        assert_eq!(
            partition::partition_count(&a, &[nu]).unwrap(),
            num_bigint::BigInt::from(count_12(nu))
        );
    }
    assert_eq!(count_12(5), 3);

    let count_hex = |nu: (i64, i64)| -> i64 {
        let mut c = 0;
        for p1 in 0..=12 {
            for p2 in 0..=12 {
                for p3 in 0..=12 {
                    if (p1 + p3, p2 + p3) == nu {
                        c += 1;
                    }
                }
            }
        }
        c
    };
    let b = phi(2, &[&[1, 0], &[0, 1], &[1, 1]]);
    assert_eq!(count_hex((2, 1)), 2);
    for x in 0..=6 {
        for y in 0..=6 {
            assert_eq!(
                partition::partition_count(&b, &[x, y]).unwrap(),
                num_bigint::BigInt::from(count_hex((x, y))),
                "count mismatch at ({x},{y})"
            );
        }
    }
}

#[test]
fn slab_description_agrees_with_lp_membership() {
    // the zonotope equals the intersection of the wall slabs; this is the
    // second route for the LP-based membership predicate
    let fixtures = [
        phi(1, &[&[1], &[2]]),
        phi(2, &[&[1, 0], &[0, 1], &[1, 1]]),
        phi(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for list in &fixtures {
        let walls = zonospline::arrangement::walls(list).unwrap();
        for _ in 0..60 {
            let v = RationalVector::new(
                (0..list.dim)
                    .map(|_| rat(rng.gen_range(-40i64..=40), rng.gen_range(7i64..=13)))
                    .collect(),
            );
            let by_lp = directions::zonotope_contains(list, &v);
            let by_slabs = walls.iter().all(|w| {
                let (lo, hi) = directions::slab_bounds(list, &w.normal);
                let a = v.dot_int(&w.normal);
                a >= Rat::from_integer(lo) && a <= Rat::from_integer(hi)
            });
            assert_eq!(by_lp, by_slabs, "routes disagree at {v}");
        }
    }
}
