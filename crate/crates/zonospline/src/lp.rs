//! Exact rational linear programming: dense two-phase simplex with Bland's
//! rule. Determinism and guaranteed termination matter more than speed here;
//! every geometry predicate in the crate (zonotope membership, tangent
//! cones, chamber coverage, enumeration bounds) routes through this solver.

use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Problem {
    vars: usize,
    free: Vec<bool>,
    rows: Vec<(Vec<Rat>, Rel, Rat)>,
    objective: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl Problem {
    /// A problem over `vars` nonnegative variables and a zero objective.
    pub fn new(vars: usize) -> Self {
        Problem {
            vars,
            free: vec![false; vars],
            rows: Vec::new(),
            objective: vec![Rat::zero(); vars],
        }
    }

    /// Marks a variable as unrestricted in sign.
    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.vars);
        self.rows.push((coeffs, rel, rhs));
    }

    /// Sets the (maximization) objective.
    pub fn set_objective(&mut self, objective: Vec<Rat>) {
        debug_assert_eq!(objective.len(), self.vars);
        self.objective = objective;
    }

    pub fn solve(&self) -> Outcome {
        Simplex::build(self).run()
    }

    /// Phase-one only: any feasible point, or `None`.
    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        match self.solve() {
            Outcome::Optimal { point, .. } => Some(point),
            Outcome::Unbounded => unreachable!("objective handling"),
            Outcome::Infeasible => None,
        }
    }
}

struct Simplex {
    // a[i][j] for structural + slack + artificial columns; rhs kept separate
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    n_total: usize,
    artificial_start: usize,
    // maps original variable index -> (column of positive part, column of negative part)
    var_cols: Vec<(usize, Option<usize>)>,
    objective: Vec<Rat>,
}

impl Simplex {
    fn build(p: &Problem) -> Simplex {
        // split free variables, count slack columns
        let mut var_cols = Vec::with_capacity(p.vars);
        let mut n_struct = 0usize;
        for j in 0..p.vars {
            if p.free[j] {
                var_cols.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            } else {
                var_cols.push((n_struct, None));
                n_struct += 1;
            }
        }
        let m = p.rows.len();
        let n_slack: usize = p
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Rel::Eq)
            .count();
        let n_total = n_struct + n_slack + m; // one artificial per row, some unused
        let artificial_start = n_struct + n_slack;

        let mut a = vec![vec![Rat::zero(); n_total]; m];
        let mut b = vec![Rat::zero(); m];
        let mut basis = vec![0usize; m];
        let mut slack_cursor = n_struct;

        for (i, (coeffs, rel, rhs)) in p.rows.iter().enumerate() {
            let flip = rhs.is_negative();
            let sign = if flip { -Rat::one() } else { Rat::one() };
            for j in 0..p.vars {
                let c = &coeffs[j] * &sign;
                let (pos, neg) = var_cols[j];
                a[i][pos] = c.clone();
                if let Some(neg) = neg {
                    a[i][neg] = -c;
                }
            }
            b[i] = rhs * &sign;
            let rel = match (rel, flip) {
                (Rel::Eq, _) => Rel::Eq,
                (Rel::Le, false) | (Rel::Ge, true) => Rel::Le,
                (Rel::Ge, false) | (Rel::Le, true) => Rel::Ge,
            };
            match rel {
                Rel::Le => {
                    a[i][slack_cursor] = Rat::one();
                    basis[i] = slack_cursor;
                    slack_cursor += 1;
                }
                Rel::Ge => {
                    a[i][slack_cursor] = -Rat::one();
                    slack_cursor += 1;
                    a[i][artificial_start + i] = Rat::one();
                    basis[i] = artificial_start + i;
                }
                Rel::Eq => {
                    a[i][artificial_start + i] = Rat::one();
                    basis[i] = artificial_start + i;
                }
            }
        }

        let mut objective = vec![Rat::zero(); n_total];
        for j in 0..p.vars {
            let (pos, neg) = var_cols[j];
            objective[pos] = p.objective[j].clone();
            if let Some(neg) = neg {
                objective[neg] = -&p.objective[j];
            }
        }

        Simplex {
            a,
            b,
            basis,
            n_total,
            artificial_start,
            var_cols,
            objective,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v = &*v / &p;
        }
        self.b[row] = &self.b[row] / &p;
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.n_total {
                if !self.a[row][j].is_zero() {
                    let d = &self.a[row][j] * &f;
                    self.a[i][j] = &self.a[i][j] - &d;
                }
            }
            let d = &self.b[row] * &f;
            self.b[i] = &self.b[i] - &d;
        }
        self.basis[row] = col;
    }

    /// Bland's rule iteration for maximizing `cost` over eligible columns.
    /// Returns false if the problem is unbounded in that direction.
    fn optimize(&mut self, cost: &[Rat], allow_artificial: bool) -> bool {
        loop {
            // reduced costs: rc_j = cost_j - cost_B . B^{-1} a_j
            let cb: Vec<Rat> = self.basis.iter().map(|&j| cost[j].clone()).collect();
            let mut entering = None;
            let limit = if allow_artificial { self.n_total } else { self.artificial_start };
            'cols: for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for i in 0..self.a.len() {
                    if !cb[i].is_zero() && !self.a[i][j].is_zero() {
                        rc -= &cb[i] * &self.a[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else { return true };
            // minimum ratio test, ties broken by smallest basis index
            let mut best: Option<(Rat, usize)> = None;
            for i in 0..self.a.len() {
                if self.a[i][col].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][col];
                    match &best {
                        None => best = Some((ratio, i)),
                        Some((r, bi)) => {
                            if ratio < *r
                                || (ratio == *r && self.basis[i] < self.basis[*bi])
                            {
                                best = Some((ratio, i));
                            }
                        }
                    }
                }
            }
            match best {
                Some((_, row)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn run(mut self) -> Outcome {
        // Phase I: maximize -(sum of artificials)
        let mut phase1 = vec![Rat::zero(); self.n_total];
        for j in self.artificial_start..self.n_total {
            phase1[j] = -Rat::one();
        }
        self.optimize(&phase1, true);
        let infeasibility: Rat = self
            .basis
            .iter()
            .zip(&self.b)
            .filter(|(&j, _)| j >= self.artificial_start)
            .map(|(_, v)| v.clone())
            .sum();
        if !infeasibility.is_zero() {
            return Outcome::Infeasible;
        }
        // drive lingering zero-value artificials out of the basis
        for i in 0..self.basis.len() {
            if self.basis[i] >= self.artificial_start {
                if let Some(col) =
                    (0..self.artificial_start).find(|&j| !self.a[i][j].is_zero())
                {
                    self.pivot(i, col);
                }
            }
        }
        // Phase II
        let cost = self.objective.clone();
        if !self.optimize(&cost, false) {
            return Outcome::Unbounded;
        }
        let mut solution = vec![Rat::zero(); self.n_total];
        for (i, &j) in self.basis.iter().enumerate() {
            solution[j] = self.b[i].clone();
        }
        let point: Vec<Rat> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &solution[pos] - &solution[neg],
                None => solution[pos].clone(),
            })
            .collect();
        let value: Rat = self
            .objective
            .iter()
            .zip(&solution)
            .map(|(c, x)| c * x)
            .sum();
        Outcome::Optimal { value, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn simple_feasibility() {
        // t1 + 2 t2 = 3, t in [0,1]^2: feasible only at t = (1,1)
        let mut p = Problem::new(2);
        p.add_row(r(&[1, 2]), Rel::Eq, rat_int(3));
        p.add_row(r(&[1, 0]), Rel::Le, rat_int(1));
        p.add_row(r(&[0, 1]), Rel::Le, rat_int(1));
        let pt = p.feasible_point().unwrap();
        assert_eq!(pt, r(&[1, 1]));

        let mut q = Problem::new(2);
        q.add_row(r(&[1, 2]), Rel::Eq, rat(7, 2));
        q.add_row(r(&[1, 0]), Rel::Le, rat_int(1));
        q.add_row(r(&[0, 1]), Rel::Le, rat_int(1));
        assert_eq!(q.solve(), Outcome::Infeasible);
    }

    #[test]
    fn optimization_with_free_vars() {
        // max x + y over the triangle x,y free, x >= 0 enforced by rows
        let mut p = Problem::new(2);
        p.set_free(0);
        p.set_free(1);
        p.add_row(r(&[1, 0]), Rel::Ge, rat_int(-1));
        p.add_row(r(&[0, 1]), Rel::Ge, rat_int(-2));
        p.add_row(r(&[1, 1]), Rel::Le, rat(5, 2));
        p.set_objective(r(&[1, 1]));
        match p.solve() {
            Outcome::Optimal { value, .. } => assert_eq!(value, rat(5, 2)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn unbounded_detection() {
        let mut p = Problem::new(1);
        p.add_row(r(&[1]), Rel::Ge, rat_int(1));
        p.set_objective(r(&[1]));
        assert_eq!(p.solve(), Outcome::Unbounded);
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's cycling example; Bland must terminate at 1/20
        let mut p = Problem::new(4);
        p.add_row(
            vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
            Rel::Le,
            rat_int(0),
        );
        p.add_row(
            vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
            Rel::Le,
            rat_int(0),
        );
        p.add_row(r(&[0, 0, 1, 0]), Rel::Le, rat_int(1));
        p.set_objective(vec![rat(3, 4), rat_int(-150), rat(1, 50), rat_int(-6)]);
        match p.solve() {
            Outcome::Optimal { value, .. } => assert_eq!(value, rat(1, 20)),
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
