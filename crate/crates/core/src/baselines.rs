//! Comparison algorithms: SetCover, BestCostGreedy and PairGreedy.

use std::time::Instant;

use crate::cost::evaluate;
use crate::error::{Error, Result};
use crate::model::{Algorithm, CostBreakdown, Instance, SkillSet, SolveReport, TeamAssignment};

/// A move is accepted only if it lowers `B` by more than this.
pub const IMPROVEMENT_EPS: f64 = 1e-12;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")))
    }
}

fn report(instance: &Instance, assignment: TeamAssignment, lambda: f64, algorithm: Algorithm, start: Instant) -> SolveReport {
    let (l, c) = evaluate(&assignment, instance);
    SolveReport {
        assignment,
        cost: CostBreakdown::new(l, c, lambda),
        algorithm,
        chosen_ell: None,
        rounds_used: None,
        seed: None,
        wall_time: start.elapsed(),
    }
}

/// Greedy set cover per task: keep adding the expert with the largest overlap
/// with the uncovered skills until nothing is left or nobody overlaps.
pub fn set_cover(instance: &Instance, lambda: f64) -> Result<SolveReport> {
    check_lambda(lambda)?;
    let start = Instant::now();
    let mut assignment = TeamAssignment::empty(instance.k());
    for task in instance.tasks() {
        let mut residual = task.skills().clone();
        while !residual.is_clear() {
            let best = instance
                .experts()
                .iter()
                .map(|e| (residual.intersection_count(&e.skills), e.id))
                .filter(|&(overlap, _)| overlap > 0)
                // max overlap, then min id
                .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let Some((_, i)) = best else { break };
            assignment.insert(task.id, i);
            residual.difference_with(&instance.expert(i).skills);
        }
    }
    Ok(report(instance, assignment, lambda, Algorithm::SetCover, start))
}

/// Change in `B` from adding expert `i` to a team whose residual is `residual`.
fn delta_b(
    instance: &Instance,
    lambda: f64,
    residual: &SkillSet,
    task_size: usize,
    i: usize,
    loads: &[usize],
    max_load: usize,
) -> f64 {
    let covered = residual.intersection_count(&instance.expert(i).skills);
    let new_max = max_load.max(loads[i] + 1);
    lambda * (new_max - max_load) as f64 - covered as f64 / task_size as f64
}

/// Per task in id order, add the expert that lowers `B` the most, while some
/// expert lowers it at all.
pub fn best_cost_greedy(instance: &Instance, lambda: f64) -> Result<SolveReport> {
    check_lambda(lambda)?;
    let start = Instant::now();
    let mut assignment = TeamAssignment::empty(instance.k());
    let mut loads = vec![0usize; instance.n()];
    let mut max_load = 0;
    for task in instance.tasks() {
        let size = task.size();
        let mut residual = task.skills().clone();
        loop {
            let mut best: Option<(f64, usize)> = None;
            for e in instance.experts() {
                if assignment.contains(task.id, e.id) {
                    continue;
                }
                let d = delta_b(instance, lambda, &residual, size, e.id, &loads, max_load);
                if d < -IMPROVEMENT_EPS && best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, e.id));
                }
            }
            let Some((_, i)) = best else { break };
            assignment.insert(task.id, i);
            loads[i] += 1;
            max_load = max_load.max(loads[i]);
            residual.difference_with(&instance.expert(i).skills);
        }
    }
    Ok(report(instance, assignment, lambda, Algorithm::BestCostGreedy, start))
}

/// Repeatedly applies the single (task, expert) addition that lowers `B` the
/// most across all tasks, until no addition lowers it.
pub fn pair_greedy(instance: &Instance, lambda: f64) -> Result<SolveReport> {
    check_lambda(lambda)?;
    let start = Instant::now();
    let mut assignment = TeamAssignment::empty(instance.k());
    let mut loads = vec![0usize; instance.n()];
    let mut max_load = 0;
    let sizes: Vec<usize> = instance.tasks().iter().map(|t| t.size()).collect();
    let mut residuals: Vec<SkillSet> = instance.tasks().iter().map(|t| t.skills().clone()).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for j in 0..instance.k() {
            if residuals[j].is_clear() {
                continue;
            }
            for e in instance.experts() {
                if assignment.contains(j, e.id) {
                    continue;
                }
                let d = delta_b(instance, lambda, &residuals[j], sizes[j], e.id, &loads, max_load);
                if d < -IMPROVEMENT_EPS && best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, j, e.id));
                }
            }
        }
        let Some((_, j, i)) = best else { break };
        assignment.insert(j, i);
        loads[i] += 1;
        max_load = max_load.max(loads[i]);
        residuals[j].difference_with(&instance.expert(i).skills);
    }
    Ok(report(instance, assignment, lambda, Algorithm::PairGreedy, start))
}
