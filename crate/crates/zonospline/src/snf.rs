//! Smith normal form of integer matrices, with the right transform tracked.
//! Used to enumerate the solutions of `A u = 0 mod Z^d` per basis subset
//! when building the vertex set of the torus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal entries, nonnegative, divisibility chain d1 | d2 | ...
    pub diag: Vec<BigInt>,
    /// Right transform Q (unimodular) with S = P * A * Q.
    pub q: Vec<Vec<BigInt>>,
}

/// Smith normal form of a square integer matrix. Row transforms are applied
/// but not tracked; the column transform Q is returned.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let n = a.len();
    let mut s: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut q: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();

    for t in 0..n {
        loop {
            // move a minimal nonzero entry of the trailing block to (t,t)
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !s[i][j].is_zero() {
                        let better = pivot
                            .map_or(true, |(pi, pj)| s[i][j].abs() < s[pi][pj].abs());
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            s.swap(t, pi);
            if pj != t {
                for row in s.iter_mut() {
                    row.swap(t, pj);
                }
                for row in q.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut clean = true;
            for i in t + 1..n {
                if !s[i][t].is_zero() {
                    let f = s[i][t].div_floor(&s[t][t]);
                    for j in t..n {
                        let d = &s[t][j] * &f;
                        s[i][j] -= d;
                    }
                    if !s[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !s[t][j].is_zero() {
                    let f = s[t][j].div_floor(&s[t][t]);
                    for i in 0..n {
                        let d = &s[i][t] * &f;
                        s[i][j] -= d;
                        let dq = &q[i][t] * &f;
                        q[i][j] -= dq;
                    }
                    if !s[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean && s[t][t..].iter().skip(1).all(|x| x.is_zero()) {
                // also require the column clean
                if (t + 1..n).all(|i| s[i][t].is_zero()) {
                    break;
                }
            }
        }
        if s[t][t].is_negative() {
            for j in 0..n {
                s[t][j] = -s[t][j].clone();
            }
        }
    }

    // enforce the divisibility chain d_t | d_{t+1}
    for t in 0..n.saturating_sub(1) {
        for u in t + 1..n {
            if s[t][t].is_zero() {
                continue;
            }
            if !(&s[u][u] % &s[t][t]).is_zero() {
                // add column u to column t, then re-reduce the 2x2 block
                for i in 0..n {
                    let v = s[i][u].clone();
                    s[i][t] += v;
                    let vq = q[i][u].clone();
                    q[i][t] += vq;
                }
                reduce_pair(&mut s, &mut q, t, u);
            }
        }
    }

    let diag = (0..n).map(|i| s[i][i].abs()).collect();
    Snf { diag, q }
}

/// Restores diagonal form on rows/columns {t, u} after a column merge.
fn reduce_pair(s: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], t: usize, u: usize) {
    let n = s.len();
    loop {
        let mut progress = false;
        // row reduce within the pair
        if !s[u][t].is_zero() {
            if s[t][t].is_zero() || (!s[u][t].is_zero() && s[u][t].abs() < s[t][t].abs()) {
                s.swap(t, u);
            }
            if !s[u][t].is_zero() {
                let f = s[u][t].div_floor(&s[t][t]);
                for j in 0..n {
                    let d = &s[t][j] * &f;
                    s[u][j] -= d;
                }
                progress = true;
            }
        }
        if !s[t][u].is_zero() {
            if s[t][t].is_zero() || s[t][u].abs() < s[t][t].abs() {
                for row in s.iter_mut() {
                    row.swap(t, u);
                }
                for row in q.iter_mut() {
                    row.swap(t, u);
                }
            }
            if !s[t][u].is_zero() {
                let f = s[t][u].div_floor(&s[t][t]);
                for i in 0..n {
                    let d = &s[i][t] * &f;
                    s[i][u] -= d;
                    let dq = &q[i][t] * &f;
                    q[i][u] -= dq;
                }
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if s[t][t].is_negative() {
        for j in 0..n {
            s[t][j] = -s[t][j].clone();
        }
    }
    if s[u][u].is_negative() {
        for j in 0..n {
            s[u][j] = -s[u][j].clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: Vec<Vec<i64>>, expect_diag: Vec<i64>) {
        let snf = smith_normal_form(&a);
        let diag: Vec<i64> = snf.diag.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(diag, expect_diag, "matrix {a:?}");
        // Q must be unimodular
        let det = det_bigint(&snf.q);
        assert!(det.abs() == BigInt::from(1), "Q not unimodular: det {det}");
    }

    fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        match n {
            1 => m[0][0].clone(),
            2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
            3 => {
                &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
            }
            _ => panic!("test determinant only to 3x3"),
        }
    }

    #[test]
    fn diagonal_forms() {
        check(vec![vec![2]], vec![2]);
        check(vec![vec![1, 0], vec![0, 1]], vec![1, 1]);
        check(vec![vec![2, 0], vec![0, 3]], vec![1, 6]);
        check(vec![vec![1, 2], vec![3, 4]], vec![1, 2]);
        check(vec![vec![6, 4], vec![4, 6]], vec![2, 10]);
        check(
            vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]],
            vec![1, 2, 4],
        );
    }
}
