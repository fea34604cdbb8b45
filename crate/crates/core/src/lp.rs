//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both the entering and the leaving
//! variable, so the method terminates on degenerate problems. All variables
//! are nonnegative; callers split free variables themselves.

use num_traits::{One, Signed, Zero};

use crate::ratgeom::Rational;

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

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// `maximize objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// A program with a zero objective, i.e. a pure feasibility problem.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// `rows[i]` holds the coefficients of every column followed by the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    ncols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            if c.rhs.is_negative() {
                let relation = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((
                    c.coeffs.iter().map(|a| -a).collect::<Vec<_>>(),
                    relation,
                    -&c.rhs,
                ));
            } else {
                normalized.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            }
        }
        let num_slack = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let num_art = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_artificial = n + num_slack;
        let ncols = first_artificial + num_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n, first_artificial);
        for (coeffs, relation, rhs) in normalized {
            let mut row = coeffs;
            row.resize(ncols + 1, Rational::zero());
            row[ncols] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            num_vars: n,
            first_artificial,
            ncols,
        }
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        if self.ncols > self.first_artificial {
            let phase1: Vec<Rational> = (0..self.ncols)
                .map(|j| {
                    if j >= self.first_artificial {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let mut obj = self.reduced_costs(&phase1);
            if !self.optimize(&mut obj, self.ncols) {
                unreachable!("phase one is bounded by construction");
            }
            // obj[rhs] holds minus the current objective value
            if !obj[self.ncols].is_zero() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }

        let mut costs = objective.to_vec();
        costs.resize(self.ncols, Rational::zero());
        let mut obj = self.reduced_costs(&costs);
        if !self.optimize(&mut obj, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut solution = vec![Rational::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                solution[b] = row[self.ncols].clone();
            }
        }
        LpOutcome::Optimal {
            value: -&obj[self.ncols],
            solution,
        }
    }

    /// Row of reduced costs `c_j - c_B B^-1 A_j`, with `-z` in the rhs slot.
    fn reduced_costs(&self, costs: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = costs.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= cb * v;
            }
        }
        obj
    }

    /// Pivots until optimal. Only columns below `allowed` may enter.
    /// Returns false if the objective is unbounded.
    fn optimize(&mut self, obj: &mut [Rational], allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[col];
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
            let Some((row, _)) = best else {
                return false;
            };
            self.pivot(row, col, obj);
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate_with(row, &pivot_row, c);
        }
        eliminate_with(obj, &pivot_row, c);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// After a feasible phase one, artificial variables still basic sit at
    /// level zero. Pivot them onto real columns, or drop the row when it is a
    /// linear combination of the others.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut scratch = vec![Rational::zero(); self.ncols + 1];
                    self.pivot(i, j, &mut scratch);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

fn eliminate_with(row: &mut [Rational], pivot_row: &[Rational], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let factor = row[c].clone();
    for (v, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *v -= &factor * p;
        }
    }
}
