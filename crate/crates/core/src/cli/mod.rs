//! `teamfit` command line.
//!
//! Exit codes: 0 success, 1 I/O or input-file errors, 2 usage errors,
//! 3 infeasible instances or failed generation, 4 exhaustive-search size guard.

pub mod experiments;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataio::{instance_stats, parse_instance, parse_records, write_experts, write_tasks, RecordKind};
use crate::error::{Error, Result};
use crate::model::{Algorithm, Instance, SolveConfig, DEFAULT_DELTA, DEFAULT_ELL_MAX};
use crate::required::{mark_required, r_balanced_solve, RequiredSplitConfig};
use crate::synth::{synth_generate, DEFAULT_REMOVAL_FRACTION};
use experiments::*;

#[derive(Debug, Parser)]
#[command(name = "teamfit", version, about = "Balanced team assignment solvers and experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance with one algorithm.
    Solve(SolveArgs),
    /// Sweep the load/coverage weight lambda.
    SweepLambda(SweepLambdaArgs),
    /// Sweep the probability of marking task skills as required.
    SweepPs(SweepPsArgs),
    /// Load against incompleteness over a lambda grid.
    Tradeoff(TradeoffArgs),
    /// Time algorithms over repeated runs.
    Bench(BenchArgs),
    /// Generate a synthetic instance from an expert pool.
    Gen(GenArgs),
    /// Print dataset statistics.
    Stats(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub experts: PathBuf,
    #[arg(long)]
    pub tasks: PathBuf,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    /// Cap on the greedy load sweep.
    #[arg(long = "lmax", default_value_t = DEFAULT_ELL_MAX)]
    pub ell_max: usize,
    /// Failure probability sizing the rounding rounds.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl TuningArgs {
    fn config(&self, lambda: f64) -> Result<SolveConfig> {
        let cfg = SolveConfig {
            lambda,
            ell_max: self.ell_max,
            delta: self.delta,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: Algorithm,
    #[arg(long)]
    pub lambda: f64,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Mark each task skill required with this probability and solve the
    /// required-skill variant.
    #[arg(long)]
    pub ps: Option<f64>,
    /// Solver for the residual instance of the required-skill variant
    /// (defaults to --algo).
    #[arg(long, value_parser = parse_algorithm)]
    pub inner: Option<Algorithm>,
    /// Assignment CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the covering LP in CPLEX LP format.
    #[arg(long)]
    pub dump_lp: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepLambdaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Option<Vec<Algorithm>>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    /// Add lambda values inside (0, 1/(kN)).
    #[arg(long)]
    pub np_hard_grid: bool,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepPsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Option<Vec<Algorithm>>,
    #[arg(long = "ps-list", value_delimiter = ',')]
    pub ps_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 4.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Option<Vec<Algorithm>>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algos: Option<Vec<Algorithm>>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 4.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub source_experts: PathBuf,
    #[arg(long, default_value_t = DEFAULT_REMOVAL_FRACTION)]
    pub q: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub min_skills: usize,
    #[arg(long)]
    pub max_skills: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes `<prefix>.experts.tsv` and `<prefix>.tasks.tsv`.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => 2,
        Error::Infeasible { .. } | Error::LpInfeasible | Error::Generation(_) => 3,
        Error::TooLarge { .. } => 4,
        Error::InvalidInstance(_) | Error::SolverFailure { .. } | Error::Parse { .. } | Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_input(input: &InputArgs) -> Result<Instance> {
    parse_instance(&input.experts, &input.tasks)
}

fn warn_slow(instance: &Instance, algos: &[Algorithm]) {
    let cells = instance.n() * instance.k();
    if algos.contains(&Algorithm::PairGreedy) && cells > PAIR_GREEDY_WARN_CELLS {
        eprintln!(
            "warning: pair-greedy rescans all {cells} (task, expert) pairs per move and may take very long"
        );
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let mut instance = load_input(&args.input)?;
    let cfg = args.tuning.config(args.lambda)?;
    if let Some(path) = &args.dump_lp {
        fs::write(path, crate::lp::build_lp(&instance)?.to_lp_format())?;
    }
    if let Some(p_s) = args.ps {
        instance = mark_required(&instance, &RequiredSplitConfig { p_s, seed: cfg.seed })?;
    }
    let report = if instance.has_required() {
        let inner = args.inner.unwrap_or(args.algo);
        warn_slow(&instance, &[inner]);
        r_balanced_solve(&instance, &cfg, inner)?
    } else {
        warn_slow(&instance, &[args.algo]);
        crate::solve(args.algo, &instance, &cfg)?
    };
    write_assignment(output(args.out.as_deref())?, &instance, &report)?;
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    eprintln!(
        "algorithm={} lambda={} load={} incompleteness={} B={} chosen_ell={} rounds={} seed={} time_ms={}",
        report.algorithm,
        report.cost.lambda,
        report.cost.load,
        report.cost.incompleteness,
        report.cost.combined,
        opt(report.chosen_ell.map(|v| v.to_string())),
        opt(report.rounds_used.map(|v| v.to_string())),
        cfg.seed,
        report.wall_time.as_millis()
    );
    Ok(())
}

fn cmd_sweep_lambda(args: &SweepLambdaArgs) -> Result<()> {
    let instance = load_input(&args.input)?;
    let algos = args.algos.clone().unwrap_or_else(|| SWEEP_ALGOS.to_vec());
    let mut lambdas = args.lambdas.clone().unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec());
    if args.np_hard_grid {
        lambdas.extend(np_hard_lambdas(&instance));
    }
    let cfg = args.tuning.config(0.0)?;
    for &l in &lambdas {
        SolveConfig { lambda: l, ..cfg }.validate()?;
    }
    warn_slow(&instance, &algos);
    let rows = sweep_lambda(&instance, &algos, &lambdas, &cfg)?;
    write_rows(output(args.out.as_deref())?, &rows)
}

fn cmd_sweep_ps(args: &SweepPsArgs) -> Result<()> {
    let instance = load_input(&args.input)?;
    let algos = args.algos.clone().unwrap_or_else(|| SWEEP_ALGOS.to_vec());
    let ps = args.ps_list.clone().unwrap_or_else(|| DEFAULT_PS.to_vec());
    let cfg = args.tuning.config(args.lambda)?;
    warn_slow(&instance, &algos);
    let rows = sweep_ps(&instance, &algos, &ps, &cfg)?;
    write_rows(output(args.out.as_deref())?, &rows)
}

fn cmd_tradeoff(args: &TradeoffArgs) -> Result<()> {
    let instance = load_input(&args.input)?;
    let algos = args.algos.clone().unwrap_or_else(|| TRADEOFF_ALGOS.to_vec());
    let lambdas = args.lambdas.clone().unwrap_or_else(|| DEFAULT_TRADEOFF_LAMBDAS.to_vec());
    let cfg = args.tuning.config(0.0)?;
    for &l in &lambdas {
        SolveConfig { lambda: l, ..cfg }.validate()?;
    }
    warn_slow(&instance, &algos);
    let rows = sweep_lambda(&instance, &algos, &lambdas, &cfg)?;
    write_rows(output(args.out.as_deref())?, &rows)
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let instance = load_input(&args.input)?;
    let algos = args.algos.clone().unwrap_or_else(|| SWEEP_ALGOS.to_vec());
    let cfg = args.tuning.config(args.lambda)?;
    warn_slow(&instance, &algos);
    let rows = bench(&instance, &algos, args.repeats, &cfg)?;
    write_bench(output(args.out.as_deref())?, &rows)
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let text = fs::read_to_string(&args.source_experts)?;
    let source = parse_records(&text, &args.source_experts.display().to_string(), RecordKind::Experts)?;
    let generated = synth_generate(&source, args.q, args.k, (args.min_skills, args.max_skills), args.seed)?;
    let instance = generated.instance()?;
    let prefix = args.out_prefix.display().to_string();
    fs::write(format!("{prefix}.experts.tsv"), write_experts(&instance))?;
    fs::write(format!("{prefix}.tasks.tsv"), write_tasks(&instance))?;
    Ok(())
}

fn cmd_stats(args: &InputArgs) -> Result<()> {
    print!("{}", instance_stats(&load_input(args)?));
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::SweepLambda(a) => cmd_sweep_lambda(a),
        Command::SweepPs(a) => cmd_sweep_ps(a),
        Command::Tradeoff(a) => cmd_tradeoff(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Stats(a) => cmd_stats(a),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
