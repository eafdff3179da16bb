//! Plain-text instance files.
//!
//! Both files hold one record per line, `<id>\t<skill>,<skill>,...`. Lines
//! whose first non-blank character is `#` are comments and blank lines are
//! skipped. In the tasks file a leading `!` marks a skill as required.
//!
//! Skill ids are interned in order of first appearance in the tasks file.
//! Expert skills that no task asks for are dropped.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{Expert, Instance, Task};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSkill {
    pub name: String,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub id: String,
    pub skills: Vec<RawSkill>,
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Experts,
    Tasks,
}

fn parse_error(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

/// Parses the records of one file. `file` only labels error messages.
pub fn parse_records(text: &str, file: &str, kind: RecordKind) -> Result<Vec<RawRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (id, rest) = match raw.split_once('\t') {
            Some((id, rest)) => (id.trim(), rest),
            None => (trimmed, ""),
        };
        if id.is_empty() {
            return Err(parse_error(file, line, "missing record id"));
        }
        if rest.contains('\t') {
            return Err(parse_error(file, line, "expected exactly one tab between id and skills"));
        }
        if !seen.insert(id.to_string()) {
            return Err(parse_error(file, line, format!("duplicate id `{id}`")));
        }
        let mut skills: Vec<RawSkill> = Vec::new();
        for token in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, required) = match token.strip_prefix('!') {
                Some(name) => (name.trim(), true),
                None => (token, false),
            };
            if name.is_empty() {
                return Err(parse_error(file, line, "empty skill name after `!`"));
            }
            if required && kind == RecordKind::Experts {
                return Err(parse_error(file, line, "the `!` marker is only valid in tasks files"));
            }
            match skills.iter_mut().find(|s| s.name == name) {
                Some(existing) => existing.required |= required,
                None => skills.push(RawSkill {
                    name: name.to_string(),
                    required,
                }),
            }
        }
        if skills.is_empty() && kind == RecordKind::Tasks {
            return Err(parse_error(file, line, format!("task `{id}` has no skills")));
        }
        records.push(RawRecord {
            id: id.to_string(),
            skills,
            line,
        });
    }
    Ok(records)
}

/// Interns task skills, prunes expert skills no task uses and builds the instance.
pub fn build_instance(experts: &[RawRecord], tasks: &[RawRecord]) -> Result<Instance> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut skill_names = Vec::new();
    for t in tasks {
        for s in &t.skills {
            index.entry(s.name.as_str()).or_insert_with(|| {
                skill_names.push(s.name.clone());
                skill_names.len() - 1
            });
        }
    }
    let m = skill_names.len();
    if m == 0 {
        return Err(Error::InvalidInstance("tasks file holds no tasks".into()));
    }
    let task_list = tasks
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let mut required = FixedBitSet::with_capacity(m);
            let mut optional = FixedBitSet::with_capacity(m);
            for s in &t.skills {
                let id = index[s.name.as_str()];
                if s.required {
                    required.insert(id);
                } else {
                    optional.insert(id);
                }
            }
            Task::new(j, required, optional)
        })
        .collect();
    let expert_list = experts
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut skills = FixedBitSet::with_capacity(m);
            for s in &e.skills {
                if let Some(&id) = index.get(s.name.as_str()) {
                    skills.insert(id);
                }
            }
            Expert { id: i, skills }
        })
        .collect();
    Instance::new(m, expert_list, task_list)?.with_names(
        experts.iter().map(|e| e.id.clone()).collect(),
        tasks.iter().map(|t| t.id.clone()).collect(),
        skill_names,
    )
}

pub fn parse_instance_str(experts: &str, tasks: &str) -> Result<Instance> {
    let experts = parse_records(experts, "experts", RecordKind::Experts)?;
    let tasks = parse_records(tasks, "tasks", RecordKind::Tasks)?;
    build_instance(&experts, &tasks)
}

pub fn parse_instance(experts_file: &Path, tasks_file: &Path) -> Result<Instance> {
    let experts = parse_records(
        &fs::read_to_string(experts_file)?,
        &experts_file.display().to_string(),
        RecordKind::Experts,
    )?;
    let tasks = parse_records(
        &fs::read_to_string(tasks_file)?,
        &tasks_file.display().to_string(),
        RecordKind::Tasks,
    )?;
    build_instance(&experts, &tasks)
}

/// Experts file text, skills in id order.
pub fn write_experts(instance: &Instance) -> String {
    let mut out = String::new();
    for e in instance.experts() {
        let skills: Vec<&str> = e.skills.ones().map(|s| instance.skill_names[s].as_str()).collect();
        out.push_str(&instance.expert_names[e.id]);
        out.push('\t');
        out.push_str(&skills.join(","));
        out.push('\n');
    }
    out
}

/// Tasks file text, skills in id order with required ones marked.
pub fn write_tasks(instance: &Instance) -> String {
    let mut out = String::new();
    for t in instance.tasks() {
        let skills: Vec<String> = t
            .skills()
            .ones()
            .map(|s| {
                let name = &instance.skill_names[s];
                if t.required.contains(s) {
                    format!("!{name}")
                } else {
                    name.clone()
                }
            })
            .collect();
        out.push_str(&instance.task_names[t.id]);
        out.push('\t');
        out.push_str(&skills.join(","));
        out.push('\n');
    }
    out
}

/// Dataset summary in the row order of the usual statistics table.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceStats {
    pub experts: usize,
    pub tasks: usize,
    pub avg_skills_per_expert: f64,
    pub avg_skills_per_task: f64,
    pub skills: usize,
    pub max_task_size: usize,
}

pub fn instance_stats(instance: &Instance) -> InstanceStats {
    let expert_total: usize = instance.experts().iter().map(|e| e.skills.count_ones(..)).sum();
    let task_total: usize = instance.tasks().iter().map(Task::size).sum();
    InstanceStats {
        experts: instance.n(),
        tasks: instance.k(),
        avg_skills_per_expert: if instance.n() == 0 {
            0.0
        } else {
            expert_total as f64 / instance.n() as f64
        },
        avg_skills_per_task: task_total as f64 / instance.k() as f64,
        skills: instance.m(),
        max_task_size: instance.max_task_size(),
    }
}

impl fmt::Display for InstanceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24}{:>10}", "# experts", self.experts)?;
        writeln!(f, "{:<24}{:>10}", "# tasks", self.tasks)?;
        writeln!(f, "{:<24}{:>10.2}", "# avg. skills/expert", self.avg_skills_per_expert)?;
        writeln!(f, "{:<24}{:>10.2}", "# avg. skills/task", self.avg_skills_per_task)?;
        writeln!(f, "{:<24}{:>10}", "# skills", self.skills)?;
        writeln!(f, "{:<24}{:>10}", "max task size (N)", self.max_task_size)
    }
}
