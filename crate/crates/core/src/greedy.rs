//! ExpertGreedy and TaskGreedy.
//!
//! Both sweep a candidate maximum load `ell = 0..=min(ell_max, k)`, build one
//! assignment per value and keep the cheapest under `lambda * L + C`, scored
//! against the original tasks. Ties go to the smaller `ell`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::cost::Incumbent;
use crate::error::Result;
use crate::model::{Algorithm, CostBreakdown, Instance, SkillSet, SolveConfig, SolveReport, TeamAssignment};

/// Uncovered fraction `num / den` of a task, ordered exactly by
/// cross-multiplication, then by task id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct FractionKey {
    num: usize,
    den: usize,
    task: usize,
}

impl Ord for FractionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den)
            .cmp(&(other.num * self.den))
            .then(self.task.cmp(&other.task))
    }
}

impl PartialOrd for FractionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `ell` tasks whose uncovered fraction would be smallest once `expert`
/// joins them. `residuals[j]` holds the still-uncovered skills of task `j` and
/// `sizes[j]` its original size. Tasks the expert cannot improve are skipped,
/// so fewer than `ell` ids may come back.
///
/// Returned ids are ordered best first.
pub fn top_tasks(expert: &SkillSet, residuals: &[SkillSet], sizes: &[usize], ell: usize) -> Vec<usize> {
    let ell = ell.min(residuals.len());
    if ell == 0 {
        return Vec::new();
    }
    // max-heap holding the `ell` best keys seen so far
    let mut heap: BinaryHeap<FractionKey> = BinaryHeap::with_capacity(ell + 1);
    for (task, (residual, &den)) in residuals.iter().zip(sizes).enumerate() {
        if residual.is_disjoint(expert) {
            continue;
        }
        let key = FractionKey {
            num: residual.difference_count(expert),
            den,
            task,
        };
        if heap.len() < ell {
            heap.push(key);
        } else if key < *heap.peek().expect("heap holds ell > 0 keys") {
            heap.pop();
            heap.push(key);
        }
    }
    heap.into_sorted_vec().into_iter().map(|k| k.task).collect()
}

fn remaining_incompleteness(residuals: &[SkillSet], sizes: &[usize]) -> f64 {
    residuals
        .iter()
        .zip(sizes)
        .map(|(r, &s)| r.count_ones(..) as f64 / s as f64)
        .sum()
}

/// One ExpertGreedy pass at a fixed maximum load. Returns the assignment and
/// its incompleteness, tracked through the residual task skill sets.
pub fn expert_greedy_pass(instance: &Instance, ell: usize) -> (TeamAssignment, f64) {
    let sizes: Vec<usize> = instance.tasks().iter().map(|t| t.size()).collect();
    let mut residuals: Vec<SkillSet> = instance.tasks().iter().map(|t| t.skills().clone()).collect();
    let mut assignment = TeamAssignment::empty(instance.k());
    if ell > 0 {
        for expert in instance.experts() {
            for j in top_tasks(&expert.skills, &residuals, &sizes, ell) {
                assignment.insert(j, expert.id);
                residuals[j].difference_with(&expert.skills);
            }
        }
    }
    let incompleteness = remaining_incompleteness(&residuals, &sizes);
    (assignment, incompleteness)
}

pub fn expert_greedy(instance: &Instance, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let mut best = Incumbent::new();
    for ell in 0..=config.effective_ell_max(instance.k()) {
        let (assignment, incompleteness) = expert_greedy_pass(instance, ell);
        let load = assignment.loads(instance.n()).into_iter().max().unwrap_or(0);
        let cost = CostBreakdown::new(load, incompleteness, config.lambda);
        best.offer(cost.combined, (ell, assignment, cost));
    }
    let (_, (ell, assignment, cost)) = best.into_inner().expect("ell = 0 is always a candidate");
    Ok(SolveReport {
        assignment,
        cost,
        algorithm: Algorithm::ExpertGreedy,
        chosen_ell: Some(ell),
        rounds_used: None,
        seed: None,
        wall_time: start.elapsed(),
    })
}

/// Experts from `candidates` that still have capacity under `ell`, ordered by
/// the uncovered part of `residual` left after adding each one alone. Ties
/// go to the lower current load, then the lower id. Experts that cover
/// nothing in `residual` are dropped.
pub fn top_experts(
    residual: &SkillSet,
    candidates: &[usize],
    ell: usize,
    loads: &[usize],
    instance: &Instance,
) -> Vec<usize> {
    let mut keyed: Vec<(usize, usize, usize)> = candidates
        .iter()
        .copied()
        .filter(|&i| loads[i] < ell)
        .filter_map(|i| {
            let skills = &instance.expert(i).skills;
            (!residual.is_disjoint(skills)).then(|| (residual.difference_count(skills), loads[i], i))
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, _, i)| i).collect()
}

/// Heap entry for TaskGreedy: larger overlap first, then lower load, then
/// lower id. Maximizing overlap with the residual is the same as minimizing
/// what stays uncovered after the expert joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    overlap: usize,
    load: Reverse<usize>,
    id: Reverse<usize>,
}

/// One TaskGreedy pass at a fixed maximum load. Returns the assignment, its
/// maximum load and its incompleteness.
pub fn task_greedy_pass(instance: &Instance, ell: usize) -> (TeamAssignment, usize, f64) {
    let mut loads = vec![0usize; instance.n()];
    let mut max_load = 0;
    let mut assignment = TeamAssignment::empty(instance.k());
    let mut incompleteness = 0.0;
    for task in instance.tasks() {
        let mut residual = task.skills().clone();
        let mut heap: BinaryHeap<Candidate> = instance
            .experts()
            .iter()
            .filter(|e| loads[e.id] < ell)
            .filter_map(|e| {
                let overlap = residual.intersection_count(&e.skills);
                (overlap > 0).then_some(Candidate {
                    overlap,
                    load: Reverse(loads[e.id]),
                    id: Reverse(e.id),
                })
            })
            .collect();
        // Lazy re-keying: stored overlaps only overestimate, so a popped entry
        // whose fresh key still beats the next stored key is the true best.
        while !residual.is_clear() {
            let Some(top) = heap.pop() else { break };
            let skills = &instance.expert(top.id.0).skills;
            let fresh = Candidate {
                overlap: residual.intersection_count(skills),
                ..top
            };
            if fresh.overlap == 0 {
                continue;
            }
            if fresh.overlap < top.overlap && heap.peek().is_some_and(|next| *next > fresh) {
                heap.push(fresh);
                continue;
            }
            let i = fresh.id.0;
            assignment.insert(task.id, i);
            loads[i] += 1;
            max_load = max_load.max(loads[i]);
            residual.difference_with(skills);
        }
        incompleteness += residual.count_ones(..) as f64 / task.size() as f64;
    }
    (assignment, max_load, incompleteness)
}

pub fn task_greedy(instance: &Instance, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let mut best = Incumbent::new();
    for ell in 0..=config.effective_ell_max(instance.k()) {
        let (assignment, load, incompleteness) = task_greedy_pass(instance, ell);
        let cost = CostBreakdown::new(load, incompleteness, config.lambda);
        best.offer(cost.combined, (ell, assignment, cost));
    }
    let (_, (ell, assignment, cost)) = best.into_inner().expect("ell = 0 is always a candidate");
    Ok(SolveReport {
        assignment,
        cost,
        algorithm: Algorithm::TaskGreedy,
        chosen_ell: Some(ell),
        rounds_used: None,
        seed: None,
        wall_time: start.elapsed(),
    })
}
