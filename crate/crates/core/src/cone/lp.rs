//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Bland's rule (lowest-index entering and leaving variable) guarantees
//! termination without any tolerance.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `minimize objective · x` subject to the constraints. Variables are
/// nonnegative unless flagged free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    n_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            free: vec![false; n_vars],
            constraints: Vec::new(),
            objective: vec![Rational::zero(); n_vars],
        }
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.n_vars);
        self.objective = objective;
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: for each variable one column (two if free), then one
        // slack per inequality.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n_vars);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        let n_slack = self
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        ncols += n_slack;

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(self.constraints.len());
        let mut rhs: Vec<Rational> = Vec::with_capacity(self.constraints.len());
        let mut slack = structural;
        for c in &self.constraints {
            let mut row = vec![Rational::zero(); ncols];
            for (v, coef) in c.coeffs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let (p, m) = col_of[v];
                row[p] = coef.clone();
                if let Some(m) = m {
                    row[m] = -coef.clone();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
        }

        let mut cost = vec![Rational::zero(); ncols];
        for (v, coef) in self.objective.iter().enumerate() {
            let (p, m) = col_of[v];
            cost[p] = coef.clone();
            if let Some(m) = m {
                cost[m] = -coef.clone();
            }
        }

        let mut tab = Tableau::new(rows, rhs, ncols);
        if !tab.phase_one() {
            return LpOutcome::Infeasible;
        }
        match tab.phase_two(&cost) {
            None => LpOutcome::Unbounded,
            Some(value) => {
                let sol = tab.solution();
                let x = col_of
                    .iter()
                    .map(|&(p, m)| match m {
                        Some(m) => &sol[p] - &sol[m],
                        None => sol[p].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { x, value }
            }
        }
    }
}

/// Tableau in canonical form: `a[i]` expresses basic variable `basis[i]`.
struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    /// Number of real (non-artificial) columns.
    n: usize,
    /// Columns with index >= `n` are artificial; `allowed` masks them out of
    /// phase two.
    allowed: usize,
}

impl Tableau {
    fn new(rows: Vec<Vec<Rational>>, rhs: Vec<Rational>, n: usize) -> Self {
        let m = rows.len();
        let a = rows
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        Tableau {
            a,
            b: rhs,
            basis: (n..n + m).collect(),
            n,
            allowed: n + m,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Rational::one() / &self.a[row][col];
        for x in self.a[row].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.b[row] *= &inv;
        let prow = self.a[row].clone();
        let pb = self.b[row].clone();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let k = self.a[i][col].clone();
            for (x, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &k * p;
                }
            }
            self.b[i] -= &k * &pb;
        }
        self.basis[row] = col;
    }

    /// Runs Bland's-rule simplex minimizing `cost` over columns `< allowed`.
    /// Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[Rational]) -> bool {
        loop {
            // reduced cost c_j - c_B · a_j
            let entering = (0..self.allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !cost[bv].is_zero() && !self.a[i][j].is_zero() {
                        rc -= &cost[bv] * &self.a[i][j];
                    }
                }
                rc.is_negative()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    fn phase_one(&mut self) -> bool {
        let total = self.a.first().map_or(self.n, |r| r.len());
        let cost: Vec<Rational> = (0..total)
            .map(|j| if j >= self.n { Rational::one() } else { Rational::zero() })
            .collect();
        self.allowed = total;
        let bounded = self.optimize(&cost);
        debug_assert!(bounded);
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.b)
            .filter(|(&bv, _)| bv >= self.n)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return false;
        }
        // Drive remaining (zero-valued) artificials out of the basis, dropping
        // redundant rows.
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.n {
                if let Some(col) = (0..self.n).find(|&j| !self.a[i][j].is_zero()) {
                    self.pivot(i, col);
                } else {
                    self.a.remove(i);
                    self.b.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        self.allowed = self.n;
        true
    }

    fn phase_two(&mut self, cost: &[Rational]) -> Option<Rational> {
        let mut full = cost.to_vec();
        let total = self.a.first().map_or(self.n, |r| r.len());
        full.resize(total, Rational::zero());
        if !self.optimize(&full) {
            return None;
        }
        Some(
            self.basis
                .iter()
                .zip(&self.b)
                .fold(Rational::zero(), |acc, (&bv, v)| acc + &full[bv] * v),
        )
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (&bv, v) in self.basis.iter().zip(&self.b) {
            if bv < self.n {
                x[bv] = v.clone();
            }
        }
        x
    }
}
