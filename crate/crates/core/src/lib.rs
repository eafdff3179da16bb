//! Team assignment that trades expert workload against task coverage.
//!
//! Given experts and tasks as skill sets, every algorithm here forms one team
//! per task and is judged by `B = lambda * L + C`, where `L` is the largest
//! number of teams any expert joins and `C` sums, over tasks, the fraction of
//! the task's skills its team leaves uncovered.

pub mod baselines;
pub mod cli;
pub mod cost;
pub mod dataio;
pub mod error;
pub mod greedy;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod required;
pub mod rounding;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    Algorithm, CostBreakdown, Expert, Instance, SkillId, SkillSet, SolveConfig, SolveReport, Task, TeamAssignment,
};

/// Runs `algorithm` on a plain (all-optional) instance.
pub fn solve(algorithm: Algorithm, instance: &Instance, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    match algorithm {
        Algorithm::ExpertGreedy => greedy::expert_greedy(instance, config),
        Algorithm::TaskGreedy => greedy::task_greedy(instance, config),
        Algorithm::BestLoad => rounding::best_load(instance, config),
        Algorithm::Load => rounding::load(instance, config),
        Algorithm::SetCover => baselines::set_cover(instance, config.lambda),
        Algorithm::BestCostGreedy => baselines::best_cost_greedy(instance, config.lambda),
        Algorithm::PairGreedy => baselines::pair_greedy(instance, config.lambda),
        Algorithm::Oracle => oracle::brute_force_balanced(instance, config.lambda),
    }
}
