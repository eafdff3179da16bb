//! Dense two-phase tableau simplex for small linear programs.
//!
//! Solves `min c'x` subject to linear rows and `x >= 0`. Pricing is Dantzig's
//! rule, falling back to Bland's rule after a run of degenerate pivots so the
//! method cannot cycle.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-7;
const DEGENERATE_SWITCH: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// `min objective'x` over `x >= 0` subject to `constraints`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Anything able to solve a [`LinearProgram`] to optimality.
pub trait LpSolver {
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution>;
}

#[derive(Debug, Clone, Copy)]
pub struct DenseSimplex {
    pub max_iterations: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        DenseSimplex {
            max_iterations: 1_000_000,
        }
    }
}

impl LpSolver for DenseSimplex {
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution> {
        Tableau::build(lp)?.solve(lp, self.max_iterations)
    }
}

fn failure(reason: impl Into<String>) -> Error {
    Error::SolverFailure {
        reason: reason.into(),
        covering_residual: f64::NAN,
        load_residual: f64::NAN,
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// row-major `rows x (cols + 1)`, last column is the right-hand side
    a: Vec<f64>,
    basis: Vec<usize>,
    /// columns `>= first_artificial` are phase-one artificials
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Tableau> {
        if lp.objective.len() != lp.num_vars {
            return Err(failure("objective length does not match variable count"));
        }
        let rows = lp.constraints.len();
        let mut slack_count = 0;
        let mut artificial_count = 0;
        for c in &lp.constraints {
            if let Some(&(v, _)) = c.terms.iter().find(|(v, _)| *v >= lp.num_vars) {
                return Err(failure(format!("constraint references variable {v}")));
            }
            match normalized_sense(c) {
                Sense::Le => slack_count += 1,
                Sense::Ge => {
                    slack_count += 1;
                    artificial_count += 1;
                }
                Sense::Eq => artificial_count += 1,
            }
        }
        let first_slack = lp.num_vars;
        let first_artificial = first_slack + slack_count;
        let cols = first_artificial + artificial_count;
        let width = cols + 1;
        let mut a = vec![0.0; rows * width];
        let mut basis = vec![0; rows];
        let (mut slack, mut artificial) = (first_slack, first_artificial);
        for (r, c) in lp.constraints.iter().enumerate() {
            let flip = if c.rhs < 0.0 { -1.0 } else { 1.0 };
            let row = &mut a[r * width..(r + 1) * width];
            for &(v, coef) in &c.terms {
                row[v] += flip * coef;
            }
            row[cols] = flip * c.rhs;
            match normalized_sense(c) {
                Sense::Le => {
                    row[slack] = 1.0;
                    basis[r] = slack;
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[artificial] = 1.0;
                    basis[r] = artificial;
                    artificial += 1;
                }
                Sense::Eq => {
                    row[artificial] = 1.0;
                    basis[r] = artificial;
                    artificial += 1;
                }
            }
        }
        Ok(Tableau {
            rows,
            cols,
            a,
            basis,
            first_artificial,
        })
    }

    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    /// Reduced-cost row for `costs` (indexed by column) under the current basis.
    /// The last entry is minus the objective value.
    fn price(&self, costs: &[f64]) -> Vec<f64> {
        let w = self.width();
        let mut z = vec![0.0; w];
        z[..self.cols].copy_from_slice(&costs[..self.cols]);
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &self.a[r * w..(r + 1) * w];
                for (zc, &ac) in z.iter_mut().zip(row) {
                    *zc -= cb * ac;
                }
            }
        }
        z
    }

    fn pivot(&mut self, pr: usize, pc: usize, z: &mut [f64]) {
        let w = self.width();
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.a[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.a[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.a[r * w + pc];
            if f != 0.0 {
                for (v, &p) in self.a[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                self.a[r * w + pc] = 0.0;
            }
        }
        let f = z[pc];
        if f != 0.0 {
            for (v, &p) in z.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            z[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations until optimal. `allowed` bounds the columns
    /// that may enter the basis.
    fn optimize(&mut self, z: &mut [f64], allowed: usize, budget: &mut usize) -> Result<()> {
        let mut degenerate_run = 0;
        loop {
            let entering = if degenerate_run < DEGENERATE_SWITCH {
                (0..allowed)
                    .filter(|&c| z[c] < -PIVOT_EPS)
                    .min_by(|&x, &y| z[x].total_cmp(&z[y]).then(x.cmp(&y)))
            } else {
                (0..allowed).find(|&c| z[c] < -PIVOT_EPS)
            };
            let Some(pc) = entering else { return Ok(()) };

            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, pc);
                if coef > PIVOT_EPS {
                    let ratio = self.rhs(r) / coef;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - PIVOT_EPS
                                || (ratio <= lratio + PIVOT_EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, ratio)) = leaving else {
                return Err(failure("linear program is unbounded"));
            };
            if *budget == 0 {
                return Err(failure("iteration limit reached"));
            }
            *budget -= 1;
            degenerate_run = if ratio.abs() <= PIVOT_EPS { degenerate_run + 1 } else { 0 };
            self.pivot(pr, pc, z);
        }
    }

    fn solve(mut self, lp: &LinearProgram, max_iterations: usize) -> Result<LpSolution> {
        let mut budget = max_iterations;

        // phase one: minimize the sum of artificials
        if self.first_artificial < self.cols {
            let mut costs = vec![0.0; self.cols];
            for c in costs.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            let mut z = self.price(&costs);
            self.optimize(&mut z, self.cols, &mut budget)?;
            let infeasibility: f64 = (0..self.rows)
                .filter(|&r| self.basis[r] >= self.first_artificial)
                .map(|r| self.rhs(r))
                .sum();
            if infeasibility > FEAS_EPS {
                return Err(Error::LpInfeasible);
            }
            // drive zero-valued artificials out of the basis where possible;
            // rows where that fails are redundant
            for r in 0..self.rows {
                if self.basis[r] >= self.first_artificial {
                    if let Some(pc) = (0..self.first_artificial).find(|&c| self.at(r, c).abs() > PIVOT_EPS) {
                        self.pivot(r, pc, &mut z);
                    }
                }
            }
        }

        let mut costs = vec![0.0; self.cols];
        costs[..lp.num_vars].copy_from_slice(&lp.objective);
        let mut z = self.price(&costs);
        self.optimize(&mut z, self.first_artificial, &mut budget)?;

        let mut x = vec![0.0; lp.num_vars];
        for r in 0..self.rows {
            let b = self.basis[r];
            if b < lp.num_vars {
                x[b] = self.rhs(r).max(0.0);
            }
        }
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            x,
            objective,
            iterations: max_iterations - budget,
        })
    }
}

fn normalized_sense(c: &Constraint) -> Sense {
    if c.rhs < 0.0 {
        match c.sense {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
            Sense::Eq => Sense::Eq,
        }
    } else {
        c.sense
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(terms: &[(usize, f64)], sense: Sense, rhs: f64) -> Constraint {
        Constraint {
            terms: terms.to_vec(),
            sense,
            rhs,
        }
    }

    fn solve(lp: &LinearProgram) -> Result<LpSolution> {
        DenseSimplex::default().solve(lp)
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![-3.0, -5.0],
            constraints: vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn covering_with_ge_rows() {
        // min x + y s.t. x + 2y >= 2, 3x + y >= 3 -> (0.8, 0.6), 1.4
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            constraints: vec![
                row(&[(0, 1.0), (1, 2.0)], Sense::Ge, 2.0),
                row(&[(0, 3.0), (1, 1.0)], Sense::Ge, 3.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective - 1.4).abs() < 1e-9);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min x s.t. x + y = 3, -y >= -1  (y <= 1) -> x = 2
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 0.0],
            constraints: vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Eq, 3.0),
                row(&[(1, -1.0)], Sense::Ge, -1.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![1.0],
            constraints: vec![row(&[(0, 1.0)], Sense::Ge, 2.0), row(&[(0, 1.0)], Sense::Le, 1.0)],
        };
        assert!(matches!(solve(&lp), Err(Error::LpInfeasible)));
    }

    #[test]
    fn detects_unbounded() {
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![-1.0],
            constraints: vec![row(&[(0, 1.0)], Sense::Ge, 1.0)],
        };
        assert!(matches!(solve(&lp), Err(Error::SolverFailure { .. })));
    }

    #[test]
    fn redundant_equalities() {
        // duplicated row leaves an artificial stuck at zero
        let lp = LinearProgram {
            num_vars: 2,
            objective: vec![1.0, 2.0],
            constraints: vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Eq, 1.0),
                row(&[(0, 2.0), (1, 2.0)], Sense::Eq, 2.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example (Beale) under Dantzig pricing
        let lp = LinearProgram {
            num_vars: 4,
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            constraints: vec![
                row(&[(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], Sense::Le, 0.0),
                row(&[(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], Sense::Le, 0.0),
                row(&[(2, 1.0)], Sense::Le, 1.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective + 0.05).abs() < 1e-9);
    }
}
