//! Domain types shared by every solver.

use std::fmt;
use std::time::Duration;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Dense skill identifier in `[0, m)`.
pub type SkillId = usize;

/// A set of skills over the dense universe `[0, m)`.
pub type SkillSet = FixedBitSet;

/// Default cap on the load sweep of the greedy algorithms.
pub const DEFAULT_ELL_MAX: usize = 80;

/// Default failure probability used to size the rounding phase.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Tolerance used when comparing objective values.
pub const COST_EPS: f64 = 1e-9;

pub fn skill_set(m: usize, skills: impl IntoIterator<Item = SkillId>) -> SkillSet {
    let mut set = FixedBitSet::with_capacity(m);
    for s in skills {
        set.insert(s);
    }
    set
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expert {
    pub id: usize,
    pub skills: SkillSet,
}

/// A task with its skills split into required and optional parts.
///
/// Plain instances keep every skill optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: usize,
    pub required: SkillSet,
    pub optional: SkillSet,
    all: SkillSet,
}

impl Task {
    pub fn new(id: usize, required: SkillSet, optional: SkillSet) -> Self {
        let mut all = required.clone();
        all.union_with(&optional);
        Task {
            id,
            required,
            optional,
            all,
        }
    }

    /// Task with no required skills.
    pub fn optional_only(id: usize, skills: SkillSet) -> Self {
        let required = FixedBitSet::with_capacity(skills.len());
        Task::new(id, required, skills)
    }

    /// Every skill the task asks for, required or not.
    pub fn skills(&self) -> &SkillSet {
        &self.all
    }

    pub fn size(&self) -> usize {
        self.all.count_ones(..)
    }
}

/// Experts, tasks and the skill universe they live in.
///
/// Optional names are carried along so assignments can be written back in
/// terms of the identifiers used in input files.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    experts: Vec<Expert>,
    tasks: Vec<Task>,
    m: usize,
    max_task_size: usize,
    pub expert_names: Vec<String>,
    pub task_names: Vec<String>,
    pub skill_names: Vec<String>,
}

impl Instance {
    /// Builds an instance from per-expert and per-task skill sets. Every task
    /// skill is optional.
    pub fn from_sets(m: usize, experts: Vec<Vec<SkillId>>, tasks: Vec<Vec<SkillId>>) -> Result<Self> {
        let experts = experts
            .into_iter()
            .enumerate()
            .map(|(id, s)| Expert {
                id,
                skills: skill_set(m, s),
            })
            .collect();
        let tasks = tasks
            .into_iter()
            .enumerate()
            .map(|(id, s)| Task::optional_only(id, skill_set(m, s)))
            .collect();
        Instance::new(m, experts, tasks)
    }

    pub fn new(m: usize, experts: Vec<Expert>, tasks: Vec<Task>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInstance("skill universe is empty".into()));
        }
        if tasks.is_empty() {
            return Err(Error::InvalidInstance("instance has no tasks".into()));
        }
        for (i, e) in experts.iter().enumerate() {
            if e.id != i {
                return Err(Error::InvalidInstance(format!("expert at position {i} has id {}", e.id)));
            }
            if e.skills.len() != m || e.skills.ones().any(|s| s >= m) {
                return Err(Error::InvalidInstance(format!("expert {i} has skills outside [0, {m})")));
            }
        }
        for (j, t) in tasks.iter().enumerate() {
            if t.id != j {
                return Err(Error::InvalidInstance(format!("task at position {j} has id {}", t.id)));
            }
            if t.required.len() != m || t.optional.len() != m {
                return Err(Error::InvalidInstance(format!("task {j} has skills outside [0, {m})")));
            }
            if !t.required.is_disjoint(&t.optional) {
                return Err(Error::InvalidInstance(format!(
                    "task {j} lists a skill as both required and optional"
                )));
            }
            if t.size() == 0 {
                return Err(Error::InvalidInstance(format!("task {j} has no skills")));
            }
        }
        let max_task_size = tasks.iter().map(Task::size).max().unwrap_or(0);
        let expert_names = (0..experts.len()).map(|i| format!("e{i}")).collect();
        let task_names = (0..tasks.len()).map(|j| format!("t{j}")).collect();
        let skill_names = (0..m).map(|s| format!("s{s}")).collect();
        Ok(Instance {
            experts,
            tasks,
            m,
            max_task_size,
            expert_names,
            task_names,
            skill_names,
        })
    }

    pub fn with_names(
        mut self,
        expert_names: Vec<String>,
        task_names: Vec<String>,
        skill_names: Vec<String>,
    ) -> Result<Self> {
        if expert_names.len() != self.n() || task_names.len() != self.k() || skill_names.len() != self.m {
            return Err(Error::InvalidInstance("name table lengths do not match instance".into()));
        }
        self.expert_names = expert_names;
        self.task_names = task_names;
        self.skill_names = skill_names;
        Ok(self)
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn expert(&self, i: usize) -> &Expert {
        &self.experts[i]
    }

    pub fn task(&self, j: usize) -> &Task {
        &self.tasks[j]
    }

    /// Number of experts.
    pub fn n(&self) -> usize {
        self.experts.len()
    }

    /// Number of tasks.
    pub fn k(&self) -> usize {
        self.tasks.len()
    }

    /// Size of the skill universe.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Cardinality of the largest task.
    pub fn max_task_size(&self) -> usize {
        self.max_task_size
    }

    /// True when some task carries required skills.
    pub fn has_required(&self) -> bool {
        self.tasks.iter().any(|t| !t.required.is_clear())
    }

    /// First (task, skill) pair that no expert can cover, if any.
    pub fn first_uncoverable(&self) -> Option<(usize, SkillId)> {
        let mut held = FixedBitSet::with_capacity(self.m);
        for e in &self.experts {
            held.union_with(&e.skills);
        }
        self.tasks
            .iter()
            .find_map(|t| t.skills().difference(&held).next().map(|s| (t.id, s)))
    }

    pub fn is_coverable(&self) -> bool {
        self.first_uncoverable().is_none()
    }
}

/// One team per task; team `j` serves task `j`. Members are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeamAssignment {
    teams: Vec<Vec<usize>>,
}

impl TeamAssignment {
    pub fn empty(k: usize) -> Self {
        TeamAssignment {
            teams: vec![Vec::new(); k],
        }
    }

    pub fn from_teams(teams: Vec<Vec<usize>>) -> Self {
        let teams = teams
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        TeamAssignment { teams }
    }

    pub fn teams(&self) -> &[Vec<usize>] {
        &self.teams
    }

    pub fn team(&self, j: usize) -> &[usize] {
        &self.teams[j]
    }

    pub fn k(&self) -> usize {
        self.teams.len()
    }

    /// Adds expert `i` to team `j`. Returns false if already a member.
    pub fn insert(&mut self, j: usize, i: usize) -> bool {
        match self.teams[j].binary_search(&i) {
            Ok(_) => false,
            Err(pos) => {
                self.teams[j].insert(pos, i);
                true
            }
        }
    }

    pub fn contains(&self, j: usize, i: usize) -> bool {
        self.teams[j].binary_search(&i).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.iter().all(Vec::is_empty)
    }

    pub fn memberships(&self) -> usize {
        self.teams.iter().map(Vec::len).sum()
    }

    /// Per-expert number of teams joined.
    pub fn loads(&self, n: usize) -> Vec<usize> {
        let mut loads = vec![0; n];
        for team in &self.teams {
            for &i in team {
                loads[i] += 1;
            }
        }
        loads
    }

    /// Union of memberships, team by team.
    pub fn merge(&mut self, other: &TeamAssignment) {
        assert_eq!(self.k(), other.k(), "merging assignments of different shapes");
        for (j, team) in other.teams.iter().enumerate() {
            for &i in team {
                self.insert(j, i);
            }
        }
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.k() != instance.k() {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} teams but instance has {} tasks",
                self.k(),
                instance.k()
            )));
        }
        for (j, team) in self.teams.iter().enumerate() {
            if let Some(&i) = team.iter().find(|&&i| i >= instance.n()) {
                return Err(Error::InvalidArgument(format!(
                    "team {j} references expert {i} but n = {}",
                    instance.n()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub lambda: f64,
    pub ell_max: usize,
    pub delta: f64,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            lambda: 0.0,
            ell_max: DEFAULT_ELL_MAX,
            delta: DEFAULT_DELTA,
            seed: 0,
        }
    }
}

impl SolveConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        SolveConfig {
            lambda,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.ell_max == 0 {
            return Err(Error::InvalidArgument("ell_max must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    /// Load sweep upper bound, clamped to the number of tasks.
    pub fn effective_ell_max(&self, k: usize) -> usize {
        self.ell_max.min(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub load: usize,
    pub incompleteness: f64,
    pub combined: f64,
    pub lambda: f64,
}

impl CostBreakdown {
    pub fn new(load: usize, incompleteness: f64, lambda: f64) -> Self {
        CostBreakdown {
            load,
            incompleteness,
            combined: lambda * load as f64 + incompleteness,
            lambda,
        }
    }
}

impl fmt::Display for CostBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L={} C={:.6} B={:.6} (lambda={})",
            self.load, self.incompleteness, self.combined, self.lambda
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    ExpertGreedy,
    TaskGreedy,
    BestLoad,
    Load,
    SetCover,
    BestCostGreedy,
    PairGreedy,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::ExpertGreedy,
        Algorithm::TaskGreedy,
        Algorithm::BestLoad,
        Algorithm::Load,
        Algorithm::SetCover,
        Algorithm::BestCostGreedy,
        Algorithm::PairGreedy,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ExpertGreedy => "expert-greedy",
            Algorithm::TaskGreedy => "task-greedy",
            Algorithm::BestLoad => "best-load",
            Algorithm::Load => "load",
            Algorithm::SetCover => "set-cover",
            Algorithm::BestCostGreedy => "best-cost-greedy",
            Algorithm::PairGreedy => "pair-greedy",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Whether the algorithm needs every task skill to be coverable.
    pub fn needs_coverable(self) -> bool {
        matches!(self, Algorithm::BestLoad | Algorithm::Load)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// The outcome of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub assignment: TeamAssignment,
    pub cost: CostBreakdown,
    pub algorithm: Algorithm,
    pub chosen_ell: Option<usize>,
    pub rounds_used: Option<usize>,
    pub seed: Option<u64>,
    pub wall_time: Duration,
}

impl SolveReport {
    /// Everything except the wall time, for determinism checks.
    pub fn same_outcome(&self, other: &SolveReport) -> bool {
        self.assignment == other.assignment
            && self.cost == other.cost
            && self.algorithm == other.algorithm
            && self.chosen_ell == other.chosen_ell
            && self.rounds_used == other.rounds_used
            && self.seed == other.seed
    }
}
