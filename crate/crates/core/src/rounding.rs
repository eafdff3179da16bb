//! Randomized rounding of the covering LP: Load and BestLoad.
//!
//! Every round draws one uniform number per (expert, task) pair in
//! `(round, expert, task)` order from a ChaCha8 stream seeded with the run
//! seed, so the assignment after `r` rounds is a prefix of any longer run.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{evaluate, Incumbent};
use crate::error::{Error, Result};
use crate::lp::{build_lp, solve_lp, FractionalAssignment};
use crate::model::{Algorithm, CostBreakdown, Instance, SolveConfig, SolveReport, TeamAssignment};

/// `ceil(ln(2T / delta))` with `T = max(m * k, n)`.
pub fn default_rounds(instance: &Instance, delta: f64) -> Result<usize> {
    rounds_for(instance.m(), instance.k(), instance.n(), delta)
}

pub fn rounds_for(m: usize, k: usize, n: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    let t = (m * k).max(n).max(1) as f64;
    Ok((2.0 * t / delta).ln().ceil() as usize)
}

/// Cumulative assignments after rounds `0..=rounds`; entry 0 is empty.
pub fn rounding_snapshots(frac: &FractionalAssignment, rounds: usize, seed: u64) -> Vec<TeamAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = TeamAssignment::empty(frac.k);
    let mut snapshots = Vec::with_capacity(rounds + 1);
    snapshots.push(current.clone());
    for _ in 0..rounds {
        for j in 0..frac.n {
            for i in 0..frac.k {
                let u: f64 = rng.random();
                if u < frac.get(j, i) {
                    current.insert(i, j);
                }
            }
        }
        snapshots.push(current.clone());
    }
    snapshots
}

/// Expert `j` joins team `i` iff one of `rounds` Bernoulli(`X[j][i]`) draws succeeds.
pub fn load_round(frac: &FractionalAssignment, rounds: usize, seed: u64) -> TeamAssignment {
    rounding_snapshots(frac, rounds, seed)
        .pop()
        .expect("snapshot list always holds round 0")
}

pub fn fractional_solution(instance: &Instance) -> Result<FractionalAssignment> {
    solve_lp(&build_lp(instance)?)
}

/// The Load algorithm: LP relaxation, then the default number of rounding rounds.
pub fn load(instance: &Instance, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let frac = fractional_solution(instance)?;
    let rounds = default_rounds(instance, config.delta)?;
    let assignment = load_round(&frac, rounds, config.seed);
    let (l, c) = evaluate(&assignment, instance);
    Ok(SolveReport {
        assignment,
        cost: CostBreakdown::new(l, c, config.lambda),
        algorithm: Algorithm::Load,
        chosen_ell: None,
        rounds_used: Some(rounds),
        seed: Some(config.seed),
        wall_time: start.elapsed(),
    })
}

/// BestLoad: scores the cumulative assignment after every rounding round and
/// keeps the cheapest for `config.lambda`. Ties go to fewer rounds.
pub fn best_load(instance: &Instance, config: &SolveConfig) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let frac = fractional_solution(instance)?;
    let rounds = default_rounds(instance, config.delta)?;
    let mut best = Incumbent::new();
    for (r, snapshot) in rounding_snapshots(&frac, rounds, config.seed).into_iter().enumerate() {
        let (l, c) = evaluate(&snapshot, instance);
        let cost = CostBreakdown::new(l, c, config.lambda);
        best.offer(cost.combined, (r, snapshot, cost));
    }
    let (_, (r, assignment, cost)) = best.into_inner().expect("round 0 is always a candidate");
    Ok(SolveReport {
        assignment,
        cost,
        algorithm: Algorithm::BestLoad,
        chosen_ell: None,
        rounds_used: Some(r),
        seed: Some(config.seed),
        wall_time: start.elapsed(),
    })
}
