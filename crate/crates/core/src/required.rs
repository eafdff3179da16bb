//! Required-skill variant: every required skill must be covered, only
//! optional skills count toward incompleteness.
//!
//! The pipeline runs Load on the required parts of the tasks, strips every
//! skill the resulting teams already cover, solves the residual optional
//! instance with any BalancedTA algorithm and merges both assignments.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::skill_profile;
use crate::error::{Error, Result};
use crate::lp::{build_lp, solve_lp, FractionalAssignment};
use crate::model::{CostBreakdown, Instance, SkillSet, SolveConfig, SolveReport, Task, TeamAssignment};
use crate::rounding::{default_rounds, load_round};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredSplitConfig {
    pub p_s: f64,
    pub seed: u64,
}

/// Marks each task skill as required independently with probability `p_s`.
/// Skills are visited task by task in ascending skill order.
pub fn mark_required(instance: &Instance, cfg: &RequiredSplitConfig) -> Result<Instance> {
    if !(0.0..=1.0).contains(&cfg.p_s) {
        return Err(Error::InvalidArgument(format!("p_s must lie in [0, 1], got {}", cfg.p_s)));
    }
    let m = instance.m();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tasks = instance
        .tasks()
        .iter()
        .map(|t| {
            let mut required = FixedBitSet::with_capacity(m);
            let mut optional = FixedBitSet::with_capacity(m);
            for s in t.skills().ones() {
                let u: f64 = rng.random();
                if u < cfg.p_s {
                    required.insert(s);
                } else {
                    optional.insert(s);
                }
            }
            Task::new(t.id, required, optional)
        })
        .collect();
    Instance::new(m, instance.experts().to_vec(), tasks)?.with_names(
        instance.expert_names.clone(),
        instance.task_names.clone(),
        instance.skill_names.clone(),
    )
}

/// Sub-instance made of the tasks selected by `skills_of`, with all their
/// skills optional. Returns it with the original ids of its tasks.
fn sub_instance(instance: &Instance, skills_of: impl Fn(usize) -> SkillSet) -> Result<Option<(Instance, Vec<usize>)>> {
    let mut origin = Vec::new();
    let mut tasks = Vec::new();
    for j in 0..instance.k() {
        let skills = skills_of(j);
        if !skills.is_clear() {
            tasks.push(Task::optional_only(origin.len(), skills));
            origin.push(j);
        }
    }
    if tasks.is_empty() {
        return Ok(None);
    }
    let names = origin.iter().map(|&j| instance.task_names[j].clone()).collect();
    let sub = Instance::new(instance.m(), instance.experts().to_vec(), tasks)?.with_names(
        instance.expert_names.clone(),
        names,
        instance.skill_names.clone(),
    )?;
    Ok(Some((sub, origin)))
}

/// Adds, for every still-uncovered skill, the holder with the largest
/// fractional value on that task (lowest id on ties).
fn repair(instance: &Instance, frac: &FractionalAssignment, assignment: &mut TeamAssignment) -> Result<usize> {
    let mut added = 0;
    for task in instance.tasks() {
        let mut missing = task.skills().clone();
        missing.difference_with(&skill_profile(assignment.team(task.id), instance)?);
        while let Some(skill) = missing.minimum() {
            let holder = instance
                .experts()
                .iter()
                .filter(|e| e.skills.contains(skill))
                .max_by(|a, b| {
                    frac.get(a.id, task.id)
                        .total_cmp(&frac.get(b.id, task.id))
                        .then(b.id.cmp(&a.id))
                })
                .ok_or(Error::Infeasible { task: task.id, skill })?;
            assignment.insert(task.id, holder.id);
            missing.difference_with(&holder.skills);
            added += 1;
        }
    }
    Ok(added)
}

/// Load on the required skills. Returns a full-size assignment covering every
/// required skill, and the number of rounding rounds drawn.
pub fn preprocess_required(instance: &Instance, config: &SolveConfig) -> Result<(TeamAssignment, usize)> {
    let mut full = TeamAssignment::empty(instance.k());
    let Some((sub, origin)) = sub_instance(instance, |j| instance.task(j).required.clone())? else {
        return Ok((full, 0));
    };
    if let Some((task, skill)) = sub.first_uncoverable() {
        return Err(Error::Infeasible {
            task: origin[task],
            skill,
        });
    }
    let frac = solve_lp(&build_lp(&sub)?)?;
    let rounds = default_rounds(&sub, config.delta)?;
    let mut assignment = load_round(&frac, rounds, config.seed);
    repair(&sub, &frac, &mut assignment)?;
    for (i, team) in assignment.teams().iter().enumerate() {
        for &e in team {
            full.insert(origin[i], e);
        }
    }
    Ok((full, rounds))
}

/// Solves the required-skill variant with `inner` on the residual optional
/// skills. The reported incompleteness is measured against the residual sets
/// handed to `inner`.
pub fn r_balanced_solve(
    instance: &Instance,
    config: &SolveConfig,
    inner: crate::model::Algorithm,
) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let (mut merged, _) = preprocess_required(instance, config)?;

    let residuals: Vec<SkillSet> = (0..instance.k())
        .map(|j| {
            let mut r = instance.task(j).skills().clone();
            r.difference_with(&skill_profile(merged.team(j), instance)?);
            Ok(r)
        })
        .collect::<Result<_>>()?;

    let mut inner_report = None;
    let mut incompleteness = 0.0;
    if let Some((residual, origin)) = sub_instance(instance, |j| residuals[j].clone())? {
        let report = crate::solve(inner, &residual, config)?;
        for (i, team) in report.assignment.teams().iter().enumerate() {
            for &e in team {
                merged.insert(origin[i], e);
            }
        }
        for (i, &j) in origin.iter().enumerate() {
            let profile = skill_profile(merged.team(j), instance)?;
            let r = residual.task(i).skills();
            incompleteness += r.difference_count(&profile) as f64 / r.count_ones(..) as f64;
        }
        inner_report = Some(report);
    }

    let load = merged.loads(instance.n()).into_iter().max().unwrap_or(0);
    Ok(SolveReport {
        assignment: merged,
        cost: CostBreakdown::new(load, incompleteness, config.lambda),
        algorithm: inner,
        chosen_ell: inner_report.as_ref().and_then(|r| r.chosen_ell),
        rounds_used: inner_report.as_ref().and_then(|r| r.rounds_used),
        seed: Some(config.seed),
        wall_time: start.elapsed(),
    })
}
