//! Exhaustive reference solvers for tiny instances.
//!
//! A membership pattern is an `n * k`-bit counter where bit `j * k + i` puts
//! expert `j` on team `i` (expert-major). Enumeration records, for every
//! possible maximum load, the smallest incompleteness and the first pattern
//! reaching it; any `lambda` is then answered from that table.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{Algorithm, CostBreakdown, Instance, SolveReport, TeamAssignment, COST_EPS};

/// Largest `n * k` accepted by the exhaustive solvers.
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub load: usize,
    pub incompleteness: f64,
    pub pattern: u64,
}

/// Minimum incompleteness for every achievable maximum load.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    n: usize,
    k: usize,
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    pub fn assignment(&self, pattern: u64) -> TeamAssignment {
        pattern_to_assignment(pattern, self.n, self.k)
    }

    /// Optimal point for `lambda`; ties go to the smallest pattern.
    pub fn best(&self, lambda: f64) -> &FrontierPoint {
        let score = |p: &FrontierPoint| lambda * p.load as f64 + p.incompleteness;
        let min = self.points.iter().map(score).fold(f64::INFINITY, f64::min);
        self.points
            .iter()
            .filter(|p| score(p) <= min + COST_EPS)
            .min_by_key(|p| p.pattern)
            .expect("frontier always holds the empty pattern")
    }

    /// Smallest load among fully covering patterns.
    pub fn min_covering_load(&self) -> Option<&FrontierPoint> {
        self.points.iter().find(|p| p.incompleteness == 0.0)
    }
}

fn guard(instance: &Instance) -> Result<()> {
    let cells = instance.n() * instance.k();
    if cells > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            cells,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

fn pattern_to_assignment(pattern: u64, n: usize, k: usize) -> TeamAssignment {
    let mut a = TeamAssignment::empty(k);
    for j in 0..n {
        for i in 0..k {
            if pattern >> (j * k + i) & 1 == 1 {
                a.insert(i, j);
            }
        }
    }
    a
}

pub fn frontier(instance: &Instance) -> Result<Frontier> {
    guard(instance)?;
    let (n, k) = (instance.n(), instance.k());

    // uncovered[i][team] for every subset `team` of experts (bit j = expert j)
    let uncovered: Vec<Vec<f64>> = instance
        .tasks()
        .iter()
        .map(|task| {
            let size = task.size() as f64;
            let mut profiles = vec![fixedbitset::FixedBitSet::with_capacity(instance.m()); 1 << n];
            (0..1usize << n)
                .map(|team| {
                    if team != 0 {
                        let low = team.trailing_zeros() as usize;
                        let mut p = profiles[team & (team - 1)].clone();
                        p.union_with(&instance.expert(low).skills);
                        profiles[team] = p;
                    }
                    task.skills().difference_count(&profiles[team]) as f64 / size
                })
                .collect()
        })
        .collect();

    let row_mask = (1u64 << k) - 1;
    let mut best: Vec<Option<(f64, u64)>> = vec![None; k + 1];
    for pattern in 0..1u64 << (n * k) {
        let mut load = 0;
        let mut teams = vec![0usize; k];
        for j in 0..n {
            let row = pattern >> (j * k) & row_mask;
            load = load.max(row.count_ones() as usize);
            for (i, team) in teams.iter_mut().enumerate() {
                if row >> i & 1 == 1 {
                    *team |= 1 << j;
                }
            }
        }
        let c: f64 = teams.iter().enumerate().map(|(i, &t)| uncovered[i][t]).sum();
        match best[load] {
            Some((bc, _)) if c >= bc - COST_EPS => {}
            _ => best[load] = Some((c, pattern)),
        }
    }
    let points = best
        .into_iter()
        .enumerate()
        .filter_map(|(load, b)| {
            b.map(|(incompleteness, pattern)| FrontierPoint {
                load,
                incompleteness,
                pattern,
            })
        })
        .collect();
    Ok(Frontier { n, k, points })
}

/// Minimum-`B` assignment by exhaustive search.
pub fn brute_force_balanced(instance: &Instance, lambda: f64) -> Result<SolveReport> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
    }
    let start = Instant::now();
    let f = frontier(instance)?;
    let p = f.best(lambda);
    Ok(SolveReport {
        assignment: f.assignment(p.pattern),
        cost: CostBreakdown::new(p.load, p.incompleteness, lambda),
        algorithm: Algorithm::Oracle,
        chosen_ell: None,
        rounds_used: None,
        seed: None,
        wall_time: start.elapsed(),
    })
}

/// Minimum maximum load over assignments that cover every task completely.
pub fn brute_force_min_load(instance: &Instance) -> Result<(usize, TeamAssignment)> {
    guard(instance)?;
    if let Some((task, skill)) = instance.first_uncoverable() {
        return Err(Error::Infeasible { task, skill });
    }
    let f = frontier(instance)?;
    let p = f
        .min_covering_load()
        .expect("a coverable instance has a covering pattern");
    Ok((p.load, f.assignment(p.pattern)))
}
