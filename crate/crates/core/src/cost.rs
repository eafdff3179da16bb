//! Load, incompleteness and combined team-assignment costs.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{CostBreakdown, Instance, SkillSet, TeamAssignment, COST_EPS};

/// Union of the skills of the given experts.
pub fn skill_profile(team: &[usize], instance: &Instance) -> Result<SkillSet> {
    let mut profile = FixedBitSet::with_capacity(instance.m());
    for &i in team {
        let expert = instance.experts().get(i).ok_or_else(|| {
            Error::InvalidArgument(format!("expert {i} out of range (n = {})", instance.n()))
        })?;
        profile.union_with(&expert.skills);
    }
    Ok(profile)
}

/// Fraction of `skills` left uncovered by `profile`.
pub fn uncovered_fraction(skills: &SkillSet, profile: &SkillSet) -> Result<f64> {
    let size = skills.count_ones(..);
    if size == 0 {
        return Err(Error::InvalidInstance("task has no skills".into()));
    }
    Ok(skills.difference_count(profile) as f64 / size as f64)
}

/// Incompleteness of one team against task `task` (all of its skills).
pub fn task_incompleteness(team: &[usize], task: usize, instance: &Instance) -> Result<f64> {
    let profile = skill_profile(team, instance)?;
    uncovered_fraction(instance.task(task).skills(), &profile)
}

/// Maximum number of teams any expert belongs to.
pub fn load_cost(assignment: &TeamAssignment, instance: &Instance) -> Result<usize> {
    assignment.validate(instance)?;
    Ok(assignment.loads(instance.n()).into_iter().max().unwrap_or(0))
}

pub fn incompleteness_cost(assignment: &TeamAssignment, instance: &Instance) -> Result<f64> {
    assignment.validate(instance)?;
    let mut total = 0.0;
    for (j, team) in assignment.teams().iter().enumerate() {
        total += task_incompleteness(team, j, instance)?;
    }
    Ok(total)
}

pub fn team_cost(assignment: &TeamAssignment, instance: &Instance, lambda: f64) -> Result<CostBreakdown> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
    }
    let load = load_cost(assignment, instance)?;
    let incompleteness = incompleteness_cost(assignment, instance)?;
    Ok(CostBreakdown::new(load, incompleteness, lambda))
}

/// `(load, incompleteness)` of an assignment known to be valid for `instance`.
pub(crate) fn evaluate(assignment: &TeamAssignment, instance: &Instance) -> (usize, f64) {
    let load = assignment.loads(instance.n()).into_iter().max().unwrap_or(0);
    let mut profile = FixedBitSet::with_capacity(instance.m());
    let mut total = 0.0;
    for (task, team) in instance.tasks().iter().zip(assignment.teams()) {
        profile.clear();
        for &i in team {
            profile.union_with(&instance.expert(i).skills);
        }
        let skills = task.skills();
        total += skills.difference_count(&profile) as f64 / skills.count_ones(..) as f64;
    }
    (load, total)
}

/// Running minimum over a stream of scored candidates. A later candidate
/// replaces the incumbent only if it is cheaper by more than [`COST_EPS`], so
/// near-ties resolve to the earliest candidate.
#[derive(Debug)]
pub(crate) struct Incumbent<T> {
    best: Option<(f64, T)>,
}

impl<T> Incumbent<T> {
    pub(crate) fn new() -> Self {
        Incumbent { best: None }
    }

    pub(crate) fn offer(&mut self, cost: f64, candidate: T) -> bool {
        let better = match &self.best {
            None => true,
            Some((b, _)) => cost < *b - COST_EPS,
        };
        if better {
            self.best = Some((cost, candidate));
        }
        better
    }

    pub(crate) fn into_inner(self) -> Option<(f64, T)> {
        self.best
    }
}
