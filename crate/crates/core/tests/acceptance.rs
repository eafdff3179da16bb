//! Acceptance checks. Runs as a plain binary (`harness = false`) so every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.
//!
//! Timing bounds assume the test profile's optimized build.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use teamfit::cli::experiments::{sweep_lambda, write_rows};
use teamfit::cost::skill_profile;
use teamfit::lp::{build_lp, solve_lp, LP_TOL};
use teamfit::oracle::{brute_force_balanced, brute_force_min_load, frontier};
use teamfit::required::{mark_required, r_balanced_solve, RequiredSplitConfig};
use teamfit::rounding::{best_load, load};
use teamfit::synth::random_instance;
use teamfit::{solve, Algorithm, Instance, SolveConfig, SolveReport};

const LEMMA_TOL: f64 = 1e-12;
const DOMINANCE_TOL: f64 = 1e-9;
const LP_BOUND_TOL: f64 = 1e-6;
const LINEARITY_TOL: f64 = 1e-9;
const DELTA: f64 = 0.1;
const COVERAGE_SLACK: f64 = 0.07;
const TRADEOFF_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Tiny random instance with `n * k <= max_cells`.
fn tiny(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize, max_cells: usize) -> Instance {
    loop {
        let n = rng.random_range(1..=max_n);
        let k = rng.random_range(1..=max_k);
        if n * k > max_cells {
            continue;
        }
        let m = rng.random_range(2..=5);
        let seed = rng.random();
        if let Ok(inst) = random_instance(n, k, m, (0, m.min(3)), (1, m.min(3)), seed) {
            return inst;
        }
    }
}

fn tiny_coverable(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize, max_cells: usize) -> Instance {
    loop {
        let inst = tiny(rng, max_n, max_k, max_cells);
        if inst.is_coverable() {
            return inst;
        }
    }
}

fn applicable(algo: Algorithm, inst: &Instance) -> bool {
    algo != Algorithm::Oracle && (inst.is_coverable() || !algo.needs_coverable())
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(limit_s) {
        return Err(format!("took {:.2?}, limit {limit_s} s", elapsed));
    }
    Ok(())
}

fn lemma_boundary() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let algos = [
        Algorithm::ExpertGreedy,
        Algorithm::TaskGreedy,
        Algorithm::BestLoad,
        Algorithm::BestCostGreedy,
    ];
    let mut checked = 0;
    for case in 0..200 {
        // the exhaustive search is capped at n * k <= 20
        let inst = tiny(&mut rng, 6, 4, 20);
        let k = inst.k() as f64;
        let cfg = SolveConfig::with_lambda(k + 1.0);
        let mut reports = vec![brute_force_balanced(&inst, cfg.lambda).map_err(|e| e.to_string())?];
        for algo in algos.into_iter().filter(|&a| applicable(a, &inst)) {
            reports.push(solve(algo, &inst, &cfg).map_err(|e| e.to_string())?);
        }
        for r in &reports {
            if (r.cost.combined - k).abs() > LEMMA_TOL {
                return Err(format!("case {case}: {} gave B = {}, expected {k}", r.algorithm, r.cost.combined));
            }
            checked += 1;
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!("{checked} runs at lambda = k + 1 all gave B = k in {:.2?}", start.elapsed()))
}

fn oracle_dominance() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for case in 0..300 {
        let inst = tiny(&mut rng, 6, 4, 16);
        let k = inst.k() as f64;
        let f = frontier(&inst).map_err(|e| e.to_string())?;
        for lambda in [0.0, 0.3, 1.0, 2.0, k + 1.0] {
            let best = f.best(lambda);
            let opt = lambda * best.load as f64 + best.incompleteness;
            let cfg = SolveConfig::with_lambda(lambda);
            for algo in Algorithm::ALL.into_iter().filter(|&a| applicable(a, &inst)) {
                let r = solve(algo, &inst, &cfg).map_err(|e| e.to_string())?;
                if r.cost.combined < opt - DOMINANCE_TOL {
                    return Err(format!("case {case}: {algo} B = {} below optimum {opt} at lambda {lambda}", r.cost.combined));
                }
                checked += 1;
            }
        }
    }
    within(start.elapsed(), 60)?;
    Ok(format!("{checked} runs, none below the optimum, in {:.2?}", start.elapsed()))
}

fn greedy_lambda_zero() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..300 {
        let inst = tiny(&mut rng, 6, 4, 16);
        let opt = brute_force_balanced(&inst, 0.0).map_err(|e| e.to_string())?.cost.incompleteness;
        let cfg = SolveConfig {
            lambda: 0.0,
            ell_max: inst.k(),
            ..Default::default()
        };
        for algo in [Algorithm::ExpertGreedy, Algorithm::TaskGreedy] {
            let c = solve(algo, &inst, &cfg).map_err(|e| e.to_string())?.cost.incompleteness;
            if c != opt {
                return Err(format!("case {case}: {algo} C = {c}, optimum {opt}"));
            }
        }
    }
    Ok("300 instances, both greedy algorithms match the optimal C".into())
}

fn best_load_vs_load() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let inst = tiny_coverable(&mut rng, 6, 5, 30);
        let cfg = SolveConfig {
            lambda: rng.random_range(0.0..4.0),
            seed: rng.random(),
            ..Default::default()
        };
        let best = best_load(&inst, &cfg).map_err(|e| e.to_string())?;
        let plain = load(&inst, &cfg).map_err(|e| e.to_string())?;
        if best.cost.combined > plain.cost.combined {
            return Err(format!(
                "case {case}: best-load B = {} exceeds load B = {}",
                best.cost.combined, plain.cost.combined
            ));
        }
    }
    Ok("100 triples, best-load never worse than load".into())
}

fn rounding_coverage() -> Outcome {
    let start = Instant::now();
    let inst = (0..)
        .filter_map(|s| random_instance(20, 10, 15, (2, 5), (2, 5), 500 + s).ok())
        .find(|i| i.is_coverable() && i.m() == 15)
        .expect("some seed yields a coverable instance");
    let runs = 200;
    let mut complete = 0;
    for seed in 0..runs {
        let cfg = SolveConfig {
            seed,
            delta: DELTA,
            ..Default::default()
        };
        if load(&inst, &cfg).map_err(|e| e.to_string())?.cost.incompleteness == 0.0 {
            complete += 1;
        }
    }
    let rate = complete as f64 / runs as f64;
    let floor = 1.0 - DELTA - COVERAGE_SLACK;
    if rate < floor {
        return Err(format!("full coverage in {rate:.3} of runs, need {floor:.2}"));
    }
    within(start.elapsed(), 30)?;
    Ok(format!("full coverage in {rate:.3} of {runs} runs (floor {floor:.2})"))
}

fn lp_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let inst = tiny_coverable(&mut rng, 5, 4, 16);
        let lp = build_lp(&inst).map_err(|e| e.to_string())?;
        let frac = solve_lp(&lp).map_err(|e| e.to_string())?;
        let (int_load, _) = brute_force_min_load(&inst).map_err(|e| e.to_string())?;
        if frac.lp_load > int_load as f64 + LP_BOUND_TOL {
            return Err(format!("case {case}: lp load {} above integral {int_load}", frac.lp_load));
        }
        let residual = frac.covering_residual(&lp).max(frac.load_residual());
        if residual > LP_TOL {
            return Err(format!("case {case}: constraint residual {residual:e}"));
        }
        worst = worst.max(residual);
    }
    Ok(format!("100 instances, worst residual {worst:e}"))
}

fn monotone_tradeoff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let inst = loop {
            let seed = rng.random();
            if let Ok(i) = random_instance(12, 8, 10, (1, 4), (2, 5), seed) {
                if i.is_coverable() {
                    break i;
                }
            }
        };
        for algo in [Algorithm::ExpertGreedy, Algorithm::BestLoad] {
            let mut prev: Option<SolveReport> = None;
            for lambda in TRADEOFF_GRID {
                let r = solve(algo, &inst, &SolveConfig::with_lambda(lambda)).map_err(|e| e.to_string())?;
                if let Some(p) = &prev {
                    let (a, b) = (&p.cost, &r.cost);
                    if b.load > a.load || b.incompleteness < a.incompleteness || b.combined < a.combined {
                        return Err(format!("case {case}: {algo} not monotone from lambda {} to {lambda}: {a} then {b}", a.lambda));
                    }
                }
                prev = Some(r);
            }
        }
    }
    Ok("50 instances, L down and C, B up along the lambda grid".into())
}

fn set_cover_linearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..50 {
        let inst = tiny(&mut rng, 8, 6, 48);
        let first = solve(Algorithm::SetCover, &inst, &SolveConfig::with_lambda(0.0)).map_err(|e| e.to_string())?;
        let (l, c) = (first.cost.load as f64, first.cost.incompleteness);
        if inst.is_coverable() && c != 0.0 {
            return Err(format!("case {case}: coverable instance left C = {c}"));
        }
        for lambda in [0.25, 1.0, 3.0, 10.0, 100.0] {
            let r = solve(Algorithm::SetCover, &inst, &SolveConfig::with_lambda(lambda)).map_err(|e| e.to_string())?;
            let residual = (r.cost.combined - (lambda * l + c)).abs();
            if residual > LINEARITY_TOL {
                return Err(format!("case {case}: residual {residual:e} at lambda {lambda}"));
            }
        }
    }
    Ok("50 instances, B exactly linear in lambda".into())
}

fn required_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inners = [
        Algorithm::ExpertGreedy,
        Algorithm::TaskGreedy,
        Algorithm::BestLoad,
        Algorithm::SetCover,
        Algorithm::BestCostGreedy,
    ];
    for case in 0..100 {
        let inst = loop {
            if let Ok(i) = random_instance(10, 6, 8, (1, 4), (2, 5), rng.random()) {
                if i.is_coverable() {
                    break i;
                }
            }
        };
        let cfg = SolveConfig {
            lambda: rng.random_range(0.0..3.0),
            seed: rng.random(),
            ..Default::default()
        };
        for p_s in [0.25, 0.5, 0.75] {
            let marked = mark_required(&inst, &RequiredSplitConfig { p_s, seed: cfg.seed }).map_err(|e| e.to_string())?;
            for inner in inners {
                let r = r_balanced_solve(&marked, &cfg, inner).map_err(|e| e.to_string())?;
                for task in marked.tasks() {
                    let profile = skill_profile(r.assignment.team(task.id), &marked).map_err(|e| e.to_string())?;
                    if !task.required.is_subset(&profile) {
                        return Err(format!("case {case}: {inner} at p_s {p_s} misses a required skill of task {}", task.id));
                    }
                }
            }
        }

        let none = mark_required(&inst, &RequiredSplitConfig { p_s: 0.0, seed: cfg.seed }).map_err(|e| e.to_string())?;
        for inner in inners {
            let r = r_balanced_solve(&none, &cfg, inner).map_err(|e| e.to_string())?;
            let plain = solve(inner, &inst, &cfg).map_err(|e| e.to_string())?;
            if r.assignment != plain.assignment || r.cost != plain.cost {
                return Err(format!("case {case}: {inner} at p_s 0 differs from the plain solve"));
            }
        }

        let all = mark_required(&inst, &RequiredSplitConfig { p_s: 1.0, seed: cfg.seed }).map_err(|e| e.to_string())?;
        let reference = r_balanced_solve(&all, &cfg, inners[0]).map_err(|e| e.to_string())?;
        for inner in &inners[1..] {
            let r = r_balanced_solve(&all, &cfg, *inner).map_err(|e| e.to_string())?;
            if r.assignment != reference.assignment || r.cost != reference.cost {
                return Err(format!("case {case}: p_s 1 output depends on the inner algorithm ({inner})"));
            }
        }
    }
    Ok("100 instances: required skills covered, p_s 0 and 1 behave as expected".into())
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..20 {
        let inst = tiny_coverable(&mut rng, 5, 4, 16);
        let cfg = SolveConfig {
            lambda: 0.7,
            seed: 42 + case,
            ..Default::default()
        };
        for algo in Algorithm::ALL {
            let a = solve(algo, &inst, &cfg).map_err(|e| e.to_string())?;
            let b = solve(algo, &inst, &cfg).map_err(|e| e.to_string())?;
            if !a.same_outcome(&b) {
                return Err(format!("case {case}: {algo} differs between runs"));
            }
        }
        let csv = || -> Result<Vec<u8>, String> {
            let rows = sweep_lambda(&inst, &Algorithm::ALL, &TRADEOFF_GRID, &cfg).map_err(|e| e.to_string())?;
            let untimed: Vec<_> = rows.iter().map(|r| r.untimed()).collect();
            let mut out = Vec::new();
            write_rows(&mut out, &untimed).map_err(|e| e.to_string())?;
            Ok(out)
        };
        if csv()? != csv()? {
            return Err(format!("case {case}: sweep CSV differs between runs"));
        }
    }
    Ok("20 instances, all solvers and sweep CSVs reproducible".into())
}

fn desk_scale_runtime() -> Outcome {
    let inst = random_instance(500, 300, 100, (3, 12), (3, 10), 11).map_err(|e| e.to_string())?;
    let cfg = SolveConfig {
        lambda: 1.0,
        ell_max: 80,
        ..Default::default()
    };
    let t = Instant::now();
    solve(Algorithm::ExpertGreedy, &inst, &cfg).map_err(|e| e.to_string())?;
    let eg = t.elapsed();
    let t = Instant::now();
    solve(Algorithm::TaskGreedy, &inst, &cfg).map_err(|e| e.to_string())?;
    let tg = t.elapsed();
    let detail = format!("expert-greedy {eg:.2?}, task-greedy {tg:.2?}");
    within(eg, 10).map_err(|e| format!("expert-greedy {e}"))?;
    within(tg, 60).map_err(|e| format!("task-greedy {e}"))?;
    if eg >= tg {
        return Err(format!("expert-greedy not faster: {detail}"));
    }
    Ok(detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("load boundary: lambda = k + 1 forces B = k", lemma_boundary),
        ("no algorithm beats the exhaustive optimum", oracle_dominance),
        ("greedy C is optimal at lambda = 0", greedy_lambda_zero),
        ("best-load at least as good as load", best_load_vs_load),
        ("rounding reaches full coverage", rounding_coverage),
        ("LP load bounds the integral load", lp_bound),
        ("monotone load/coverage trade-off", monotone_tradeoff),
        ("set-cover cost is linear in lambda", set_cover_linearity),
        ("required skills always covered", required_coverage),
        ("determinism", determinism),
        ("desk-scale runtime", desk_scale_runtime),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
