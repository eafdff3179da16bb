//! Synthetic instances.
//!
//! [`synth_generate`] follows the marketplace recipe: a fraction of the expert
//! pool is held out and tasks are random subsets of the skills those held-out
//! experts had. [`random_instance`] draws experts and tasks independently from
//! a fixed skill universe and is used for tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataio::{build_instance, RawRecord, RawSkill};
use crate::error::{Error, Result};
use crate::model::Instance;

/// Default share of experts held out to seed task generation.
pub const DEFAULT_REMOVAL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub experts: Vec<RawRecord>,
    pub tasks: Vec<RawRecord>,
}

impl Generated {
    pub fn instance(&self) -> Result<Instance> {
        build_instance(&self.experts, &self.tasks)
    }
}

fn record(id: String, names: impl IntoIterator<Item = String>, line: usize) -> RawRecord {
    RawRecord {
        id,
        skills: names
            .into_iter()
            .map(|name| RawSkill { name, required: false })
            .collect(),
        line,
    }
}

/// Holds out `ceil(q * n)` experts chosen uniformly, then builds `k_tasks`
/// tasks, each a uniform subset of the held-out skill union whose size is
/// uniform in `size_range`. The rest of the pool becomes the expert set.
pub fn synth_generate(
    source_experts: &[RawRecord],
    q: f64,
    k_tasks: usize,
    size_range: (usize, usize),
    seed: u64,
) -> Result<Generated> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Generation(format!("removal fraction must lie in (0, 1), got {q}")));
    }
    if k_tasks == 0 {
        return Err(Error::Generation("at least one task is required".into()));
    }
    let n = source_experts.len();
    let removed = ((q * n as f64).ceil() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held_out: Vec<usize> = sample(&mut rng, n, removed).into_vec();
    held_out.sort_unstable();

    let union: Vec<&str> = held_out
        .iter()
        .flat_map(|&i| source_experts[i].skills.iter().map(|s| s.name.as_str()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if union.is_empty() {
        return Err(Error::Generation("held-out experts have no skills".into()));
    }
    let (lo, hi) = size_range;
    if lo == 0 || lo > hi || hi > union.len() {
        return Err(Error::Generation(format!(
            "task size range [{lo}, {hi}] must lie within [1, {}]",
            union.len()
        )));
    }

    let tasks = (0..k_tasks)
        .map(|j| {
            let size = rng.random_range(lo..=hi);
            let mut picked = sample(&mut rng, union.len(), size).into_vec();
            picked.sort_unstable();
            record(format!("t{j}"), picked.into_iter().map(|s| union[s].to_string()), j + 1)
        })
        .collect();
    let experts = source_experts
        .iter()
        .enumerate()
        .filter(|(i, _)| held_out.binary_search(i).is_err())
        .enumerate()
        .map(|(line, (_, e))| RawRecord {
            line: line + 1,
            ..e.clone()
        })
        .collect();
    Ok(Generated { experts, tasks })
}

fn random_records(
    rng: &mut ChaCha8Rng,
    prefix: &str,
    count: usize,
    m: usize,
    (lo, hi): (usize, usize),
) -> Vec<RawRecord> {
    (0..count)
        .map(|i| {
            let size = rng.random_range(lo..=hi);
            let mut picked = sample(rng, m, size).into_vec();
            picked.sort_unstable();
            record(format!("{prefix}{i}"), picked.into_iter().map(|s| format!("s{s}")), i + 1)
        })
        .collect()
}

/// Expert pool over skills `s0..s{m-1}` with per-expert skill counts uniform in `range`.
pub fn random_pool(n: usize, m: usize, range: (usize, usize), seed: u64) -> Result<Vec<RawRecord>> {
    check_range(m, range, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_records(&mut rng, "e", n, m, range))
}

fn check_range(m: usize, (lo, hi): (usize, usize), nonempty: bool) -> Result<()> {
    if m == 0 || lo > hi || hi > m || (nonempty && lo == 0) {
        return Err(Error::Generation(format!("skill count range [{lo}, {hi}] invalid for {m} skills")));
    }
    Ok(())
}

/// Experts and tasks drawn independently from a universe of `m` skills.
pub fn random_instance(
    n: usize,
    k: usize,
    m: usize,
    expert_range: (usize, usize),
    task_range: (usize, usize),
    seed: u64,
) -> Result<Instance> {
    check_range(m, expert_range, false)?;
    check_range(m, task_range, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let experts = random_records(&mut rng, "e", n, m, expert_range);
    let tasks = random_records(&mut rng, "t", k, m, task_range);
    build_instance(&experts, &tasks)
}
