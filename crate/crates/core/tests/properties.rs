use proptest::prelude::*;

use teamfit::cost::team_cost;
use teamfit::dataio::{parse_instance_str, write_experts, write_tasks};
use teamfit::lp::{build_lp, solve_lp};
use teamfit::oracle::frontier;
use teamfit::rounding::{fractional_solution, rounding_snapshots};
use teamfit::synth::random_instance;
use teamfit::{solve, Algorithm, Instance, SolveConfig};

fn instance(max_n: usize, max_k: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 1..=max_k, 2..=6usize, any::<u64>()).prop_filter_map("generation failed", |(n, k, m, seed)| {
        random_instance(n, k, m, (0, m.min(3)), (1, m.min(4)), seed).ok()
    })
}

fn coverable(max_n: usize, max_k: usize) -> impl Strategy<Value = Instance> {
    instance(max_n, max_k).prop_filter("uncoverable", |i| i.is_coverable())
}

fn runnable(inst: &Instance) -> impl Iterator<Item = Algorithm> + '_ {
    Algorithm::ALL
        .into_iter()
        .filter(move |a| *a != Algorithm::Oracle && (inst.is_coverable() || !a.needs_coverable()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reported_cost_matches_recomputed(inst in instance(6, 5), lambda in 0.0..5.0f64) {
        let cfg = SolveConfig::with_lambda(lambda);
        for algo in runnable(&inst) {
            let r = solve(algo, &inst, &cfg).unwrap();
            r.assignment.validate(&inst).unwrap();
            let c = team_cost(&r.assignment, &inst, lambda).unwrap();
            prop_assert_eq!(c.load, r.cost.load, "{}", algo);
            prop_assert!((c.incompleteness - r.cost.incompleteness).abs() < 1e-9, "{}", algo);
        }
    }

    #[test]
    fn above_k_everything_stays_empty(inst in instance(6, 5)) {
        let cfg = SolveConfig::with_lambda(inst.k() as f64 + 0.5);
        for algo in [Algorithm::ExpertGreedy, Algorithm::TaskGreedy, Algorithm::BestCostGreedy, Algorithm::PairGreedy] {
            prop_assert!(solve(algo, &inst, &cfg).unwrap().assignment.is_empty(), "{}", algo);
        }
    }

    #[test]
    fn never_below_the_oracle(inst in instance(4, 4), lambda in 0.0..3.0f64) {
        let best = frontier(&inst).unwrap().best(lambda).clone();
        let opt = lambda * best.load as f64 + best.incompleteness;
        for algo in runnable(&inst) {
            let r = solve(algo, &inst, &SolveConfig::with_lambda(lambda)).unwrap();
            prop_assert!(r.cost.combined >= opt - 1e-9, "{} gave {} < {}", algo, r.cost.combined, opt);
        }
    }

    #[test]
    fn snapshots_only_grow(inst in coverable(6, 5), seed in any::<u64>()) {
        let frac = fractional_solution(&inst).unwrap();
        let snaps = rounding_snapshots(&frac, 6, seed);
        for w in snaps.windows(2) {
            for i in 0..inst.k() {
                prop_assert!(w[0].team(i).iter().all(|j| w[1].contains(i, *j)));
            }
        }
    }

    #[test]
    fn lp_is_feasible(inst in coverable(6, 5)) {
        let lp = build_lp(&inst).unwrap();
        let frac = solve_lp(&lp).unwrap();
        prop_assert!(frac.covering_residual(&lp) <= 1e-6);
        prop_assert!(frac.load_residual() <= 1e-6);
        prop_assert!(frac.lp_load <= inst.k() as f64 + 1e-6);
    }

    #[test]
    fn set_cover_is_lambda_independent(inst in instance(6, 5), a in 0.0..10.0f64, b in 0.0..10.0f64) {
        let ra = solve(Algorithm::SetCover, &inst, &SolveConfig::with_lambda(a)).unwrap();
        let rb = solve(Algorithm::SetCover, &inst, &SolveConfig::with_lambda(b)).unwrap();
        prop_assert_eq!(ra.assignment, rb.assignment);
    }

    #[test]
    fn files_round_trip(inst in instance(8, 6)) {
        let (e, t) = (write_experts(&inst), write_tasks(&inst));
        let back = parse_instance_str(&e, &t).unwrap();
        prop_assert_eq!(write_experts(&back), e);
        prop_assert_eq!(write_tasks(&back), t);
    }
}
