//! LP relaxation of balanced task covering.
//!
//! Variables `x[j][i]` give the fraction of expert `j` placed on task `i`, and
//! `L` bounds every expert's fractional load:
//!
//! ```text
//! min L
//!   sum_{j : s in P_j} x[j][i] >= 1     for every task i and skill s in J_i
//!   sum_i x[j][i] - L          <= 0     for every expert j
//!   x >= 0
//! ```
//!
//! Only pairs where expert and task share a skill get a variable. The upper
//! bound `x <= 1` is implied at the optimum: clamping any entry above one keeps
//! every row feasible without raising `L`, so it is applied after solving
//! instead of being added as rows.

mod simplex;

use std::fmt::Write as _;

pub use simplex::{Constraint, DenseSimplex, LinearProgram, LpSolution, LpSolver, Sense};

use crate::error::{Error, Result};
use crate::model::{Instance, SkillId};

/// Residual tolerance for certified fractional solutions.
pub const LP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringRow {
    pub task: usize,
    pub skill: SkillId,
    /// indices into [`CoveringLP::pairs`]
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringLP {
    pub n: usize,
    pub k: usize,
    /// `(expert, task)` for each structural variable, expert-major
    pub pairs: Vec<(usize, usize)>,
    pub covering: Vec<CoveringRow>,
    /// per expert, the variables on its load row
    pub load_rows: Vec<Vec<usize>>,
}

impl CoveringLP {
    /// Index of the `L` variable in [`CoveringLP::to_linear_program`].
    pub fn load_var(&self) -> usize {
        self.pairs.len()
    }

    pub fn to_linear_program(&self) -> LinearProgram {
        let l = self.load_var();
        let mut objective = vec![0.0; l + 1];
        objective[l] = 1.0;
        let covering = self.covering.iter().map(|row| Constraint {
            terms: row.vars.iter().map(|&v| (v, 1.0)).collect(),
            sense: Sense::Ge,
            rhs: 1.0,
        });
        let load = self.load_rows.iter().map(|vars| Constraint {
            terms: vars.iter().map(|&v| (v, 1.0)).chain([(l, -1.0)]).collect(),
            sense: Sense::Le,
            rhs: 0.0,
        });
        LinearProgram {
            num_vars: l + 1,
            objective,
            constraints: covering.chain(load).collect(),
        }
    }

    /// CPLEX LP text format, with variables named `x_<expert>_<task>`.
    pub fn to_lp_format(&self) -> String {
        let name = |v: usize| {
            let (j, i) = self.pairs[v];
            format!("x_{j}_{i}")
        };
        let mut out = String::new();
        out.push_str("\\ balanced task covering relaxation\nMinimize\n obj: L\nSubject To\n");
        for row in &self.covering {
            let lhs: Vec<String> = row.vars.iter().map(|&v| name(v)).collect();
            let _ = writeln!(out, " cover_t{}_s{}: {} >= 1", row.task, row.skill, lhs.join(" + "));
        }
        for (j, vars) in self.load_rows.iter().enumerate() {
            let lhs: Vec<String> = vars.iter().map(|&v| name(v)).collect();
            let expr = if lhs.is_empty() {
                "- L".to_string()
            } else {
                format!("{} - L", lhs.join(" + "))
            };
            let _ = writeln!(out, " load_e{j}: {expr} <= 0");
        }
        out.push_str("Bounds\n");
        for v in 0..self.pairs.len() {
            let _ = writeln!(out, " 0 <= {} <= 1", name(v));
        }
        out.push_str("End\n");
        out
    }
}

/// Builds the covering LP over every skill of every task.
pub fn build_lp(instance: &Instance) -> Result<CoveringLP> {
    if let Some((task, skill)) = instance.first_uncoverable() {
        return Err(Error::Infeasible { task, skill });
    }
    let (n, k) = (instance.n(), instance.k());
    let mut pairs = Vec::new();
    let mut var_of = vec![None; n * k];
    let mut load_rows = vec![Vec::new(); n];
    for expert in instance.experts() {
        for task in instance.tasks() {
            if !expert.skills.is_disjoint(task.skills()) {
                var_of[expert.id * k + task.id] = Some(pairs.len());
                load_rows[expert.id].push(pairs.len());
                pairs.push((expert.id, task.id));
            }
        }
    }
    let mut covering = Vec::new();
    for task in instance.tasks() {
        for skill in task.skills().ones() {
            let vars = instance
                .experts()
                .iter()
                .filter(|e| e.skills.contains(skill))
                .filter_map(|e| var_of[e.id * k + task.id])
                .collect();
            covering.push(CoveringRow {
                task: task.id,
                skill,
                vars,
            });
        }
    }
    Ok(CoveringLP {
        n,
        k,
        pairs,
        covering,
        load_rows,
    })
}

/// Fractional assignment `values[j * k + i]` of expert `j` to task `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    pub n: usize,
    pub k: usize,
    pub values: Vec<f64>,
    pub lp_load: f64,
}

impl FractionalAssignment {
    pub fn get(&self, expert: usize, task: usize) -> f64 {
        self.values[expert * self.k + task]
    }

    /// Largest shortfall below one over the covering rows.
    pub fn covering_residual(&self, lp: &CoveringLP) -> f64 {
        lp.covering
            .iter()
            .map(|row| {
                let total: f64 = row
                    .vars
                    .iter()
                    .map(|&v| {
                        let (j, i) = lp.pairs[v];
                        self.get(j, i)
                    })
                    .sum();
                (1.0 - total).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    /// Largest excess of an expert's fractional load over `lp_load`.
    pub fn load_residual(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let row: f64 = self.values[j * self.k..(j + 1) * self.k].iter().sum();
                (row - self.lp_load).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

pub fn solve_lp(lp: &CoveringLP) -> Result<FractionalAssignment> {
    solve_lp_with(lp, &DenseSimplex::default())
}

pub fn solve_lp_with(lp: &CoveringLP, solver: &dyn LpSolver) -> Result<FractionalAssignment> {
    if let Some(row) = lp.covering.iter().find(|r| r.vars.is_empty()) {
        return Err(Error::Infeasible {
            task: row.task,
            skill: row.skill,
        });
    }
    let solution = solver.solve(&lp.to_linear_program())?;
    let mut values = vec![0.0; lp.n * lp.k];
    for (v, &(j, i)) in lp.pairs.iter().enumerate() {
        values[j * lp.k + i] = solution.x[v].clamp(0.0, 1.0);
    }
    let frac = FractionalAssignment {
        n: lp.n,
        k: lp.k,
        values,
        lp_load: solution.x[lp.load_var()],
    };
    let covering_residual = frac.covering_residual(lp);
    let load_residual = frac.load_residual();
    if covering_residual > LP_TOL || load_residual > LP_TOL {
        return Err(Error::SolverFailure {
            reason: "solution violates constraints".into(),
            covering_residual,
            load_residual,
        });
    }
    Ok(frac)
}
