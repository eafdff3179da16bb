//! Experiment drivers behind the CLI subcommands. Each returns rows in a
//! deterministic order; CSV writing is separate so tests can read rows back.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Algorithm, Instance, SolveConfig, SolveReport};
use crate::required::{mark_required, r_balanced_solve, RequiredSplitConfig};

pub const CSV_HEADER: [&str; 8] = ["algorithm", "lambda", "ps", "load", "incompleteness", "B", "runtime_ms", "seed"];

/// Default trade-off grid of the lambda sweep.
pub const DEFAULT_LAMBDAS: [f64; 6] = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0];

pub const DEFAULT_PS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

pub const DEFAULT_TRADEOFF_LAMBDAS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

pub const SWEEP_ALGOS: [Algorithm; 5] = [
    Algorithm::ExpertGreedy,
    Algorithm::TaskGreedy,
    Algorithm::BestLoad,
    Algorithm::SetCover,
    Algorithm::BestCostGreedy,
];

pub const TRADEOFF_ALGOS: [Algorithm; 3] = [Algorithm::ExpertGreedy, Algorithm::TaskGreedy, Algorithm::BestLoad];

/// Instances with more (expert, task) cells than this get a warning before
/// PairGreedy runs.
pub const PAIR_GREEDY_WARN_CELLS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub algorithm: Algorithm,
    pub lambda: f64,
    pub ps: Option<f64>,
    pub load: usize,
    pub incompleteness: f64,
    pub b: f64,
    pub runtime_ms: u128,
    pub seed: u64,
}

impl Row {
    fn from_report(report: &SolveReport, ps: Option<f64>, seed: u64) -> Row {
        Row {
            algorithm: report.algorithm,
            lambda: report.cost.lambda,
            ps,
            load: report.cost.load,
            incompleteness: report.cost.incompleteness,
            b: report.cost.combined,
            runtime_ms: report.wall_time.as_millis(),
            seed,
        }
    }

    /// Row without its timing column.
    pub fn untimed(&self) -> Row {
        Row {
            runtime_ms: 0,
            ..self.clone()
        }
    }

    fn record(&self) -> [String; 8] {
        [
            self.algorithm.name().to_string(),
            self.lambda.to_string(),
            self.ps.map(|p| p.to_string()).unwrap_or_default(),
            self.load.to_string(),
            self.incompleteness.to_string(),
            self.b.to_string(),
            self.runtime_ms.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_rows`].
pub fn read_rows(text: &str) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let bad = |what: &str| Error::InvalidArgument(format!("malformed CSV field `{what}`"));
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| bad(CSV_HEADER[i]));
        let num = |i: usize| -> Result<f64> { field(i)?.parse().map_err(|_| bad(CSV_HEADER[i])) };
        rows.push(Row {
            algorithm: field(0)?.parse()?,
            lambda: num(1)?,
            ps: match field(2)? {
                "" => None,
                p => Some(p.parse().map_err(|_| bad("ps"))?),
            },
            load: field(3)?.parse().map_err(|_| bad("load"))?,
            incompleteness: num(4)?,
            b: num(5)?,
            runtime_ms: field(6)?.parse().map_err(|_| bad("runtime_ms"))?,
            seed: field(7)?.parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(rows)
}

/// Thread pool sized by `TEAMFIT_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("TEAMFIT_THREADS") {
        let threads: usize = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("TEAMFIT_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(threads.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))
}

fn run_cells<T, F>(cells: Vec<T>, f: F) -> Result<Vec<Row>>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<Row> + Send + Sync,
{
    let pool = thread_pool()?;
    pool.install(|| cells.par_iter().map(&f).collect::<Result<Vec<Row>>>())
}

/// Extra lambda values inside the range where the problem is NP-hard,
/// `(0, 1 / (k N))`.
pub fn np_hard_lambdas(instance: &Instance) -> Vec<f64> {
    let bound = 1.0 / (instance.k() * instance.max_task_size()) as f64;
    [0.25, 0.5, 0.75].iter().map(|f| f * bound).collect()
}

pub fn sorted_grid(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// One row per (algorithm, lambda), algorithms in the given order and lambdas ascending.
pub fn sweep_lambda(instance: &Instance, algos: &[Algorithm], lambdas: &[f64], base: &SolveConfig) -> Result<Vec<Row>> {
    let grid = sorted_grid(lambdas);
    let cells: Vec<(Algorithm, f64)> = algos
        .iter()
        .flat_map(|&a| grid.iter().map(move |&l| (a, l)))
        .collect();
    run_cells(cells, |&(algo, lambda)| {
        let cfg = SolveConfig { lambda, ..*base };
        let report = if instance.has_required() {
            r_balanced_solve(instance, &cfg, algo)?
        } else {
            crate::solve(algo, instance, &cfg)?
        };
        Ok(Row::from_report(&report, None, base.seed))
    })
}

/// Required-skill sweep: for each `p_s`, mark skills with `base.seed` and run
/// the pipeline with each algorithm as the inner solver.
pub fn sweep_ps(instance: &Instance, algos: &[Algorithm], ps_list: &[f64], base: &SolveConfig) -> Result<Vec<Row>> {
    let marked: Vec<(f64, Instance)> = sorted_grid(ps_list)
        .into_iter()
        .map(|p_s| {
            mark_required(instance, &RequiredSplitConfig { p_s, seed: base.seed }).map(|inst| (p_s, inst))
        })
        .collect::<Result<_>>()?;
    let cells: Vec<(Algorithm, usize)> = algos
        .iter()
        .flat_map(|&a| (0..marked.len()).map(move |i| (a, i)))
        .collect();
    run_cells(cells, |&(algo, i)| {
        let (p_s, inst) = &marked[i];
        let report = r_balanced_solve(inst, base, algo)?;
        Ok(Row::from_report(&report, Some(*p_s), base.seed))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub repeats: usize,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub load: usize,
    pub incompleteness: f64,
    pub b: f64,
}

/// Times each algorithm `repeats` times in sequence; rows sorted by mean time.
pub fn bench(instance: &Instance, algos: &[Algorithm], repeats: usize, base: &SolveConfig) -> Result<Vec<BenchRow>> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &algo in algos {
        let mut times = Vec::with_capacity(repeats);
        let mut last = None;
        for _ in 0..repeats {
            let report = crate::solve(algo, instance, base)?;
            times.push(report.wall_time.as_secs_f64() * 1e3);
            last = Some(report);
        }
        let report = last.expect("repeats >= 1");
        let mean = times.iter().sum::<f64>() / repeats as f64;
        let var = if repeats > 1 {
            times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (repeats - 1) as f64
        } else {
            0.0
        };
        rows.push(BenchRow {
            algorithm: algo,
            repeats,
            mean_ms: mean,
            stddev_ms: var.sqrt(),
            load: report.cost.load,
            incompleteness: report.cost.incompleteness,
            b: report.cost.combined,
        });
    }
    rows.sort_by(|a, b| a.mean_ms.total_cmp(&b.mean_ms));
    Ok(rows)
}

pub fn write_bench<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["algorithm", "repeats", "mean_ms", "stddev_ms", "load", "incompleteness", "B"])?;
    for r in rows {
        w.write_record([
            r.algorithm.name().to_string(),
            r.repeats.to_string(),
            format!("{:.3}", r.mean_ms),
            format!("{:.3}", r.stddev_ms),
            r.load.to_string(),
            r.incompleteness.to_string(),
            r.b.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Assignment as `task,expert` membership rows using the instance's names.
pub fn write_assignment<W: Write>(out: W, instance: &Instance, report: &SolveReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["task", "expert"])?;
    for (j, team) in report.assignment.teams().iter().enumerate() {
        for &i in team {
            w.write_record([instance.task_names[j].as_str(), instance.expert_names[i].as_str()])?;
        }
    }
    w.flush()?;
    Ok(())
}
