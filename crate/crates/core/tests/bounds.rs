use cutplan::arrangement::{max_cutwidth, order_mcm, order_random, LinearArrangement, OrderingConfig};
use cutplan::bounds::{estimate_threshold, solve_xi, theorem1_bound, theorem1_for_plan, ProbeSettings};
use cutplan::epidemic::{run_ensemble, BudgetSchedule, DiffusionParams, InitialCondition, SimConfig, Strategy};
use cutplan::graph::{gen_erdos_renyi, Graph};
use cutplan::RngSeed;
use proptest::prelude::*;

fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn xi_satisfies_lemma(log_a in -6.0f64..6.0) {
        let a = 10f64.powf(log_a);
        let xi = solve_xi(a).unwrap();
        prop_assert!(xi >= 0.0);
        prop_assert!(xi <= a + 2.0 * a.sqrt());
        prop_assert!((xi - xi.ln_1p() - a).abs() <= 1e-10);
    }

    #[test]
    fn bound_is_finite_iff_condition(c in 1u32..500, d in 1usize..50, beta in 0.0f64..5.0, rho in 0.0f64..5000.0) {
        let rep = theorem1_bound(100, d, c, beta, 1.0, rho, 1).unwrap();
        prop_assert!(rep.epsilon > 0.0);
        prop_assert_eq!(rep.extinction_bound.is_some(), rep.condition_holds);
        if let Some(b) = rep.extinction_bound {
            prop_assert!(b > 0.0 && b.is_finite());
        }
    }
}

#[test]
fn bound_holds_on_small_networks() {
    let er = gen_erdos_renyi(40, 0.1, RngSeed(3)).unwrap();
    let p = path(40);
    for (g, seed) in [(&er, 1u64), (&p, 2)] {
        let plan = order_mcm(g, &OrderingConfig::with_seed(RngSeed(seed))).unwrap().arrangement;
        for (beta, slack) in [(0.05, 1.1), (0.5, 2.0)] {
            let probe = theorem1_for_plan(g, &plan, &DiffusionParams::new(beta, 1.0, 0.0, BudgetSchedule::Constant(1)).unwrap(), 1).unwrap();
            let rho = (probe.required_rho * slack).max(0.5);
            let params = DiffusionParams::normalized(beta, rho, 1).unwrap();
            let rep = theorem1_for_plan(g, &plan, &params, 1).unwrap();
            assert!(rep.condition_holds);
            let s = run_ensemble(g, &params, &Strategy::PriorityPlanning(plan.clone()), &InitialCondition::AllInfected, 10_000, RngSeed(seed), &SimConfig::with_horizon(1e6)).unwrap();
            let bound = rep.extinction_bound.unwrap();
            assert!(s.mean_tau <= bound + 3.0 * s.tau_std_error, "{} > {bound}", s.mean_tau);
        }
    }
}

#[test]
fn threshold_below_naive_bound() {
    let g = gen_erdos_renyi(100, 0.05, RngSeed(1)).unwrap();
    let order = order_random(&g, RngSeed(2));
    let c = max_cutwidth(&g, &order).unwrap();
    let naive = 10.0 * c as f64;
    let est = estimate_threshold(&g, &order, 10.0, 1, &ProbeSettings::default(), 0.05 * naive, RngSeed(3)).unwrap();
    assert_eq!(est.c_max, c);
    assert!(est.e_star <= naive, "{} > {naive}", est.e_star);
    assert!(est.width() <= 0.05 * naive);
}

#[test]
fn path_threshold_is_small() {
    let g = path(20);
    let order = order_mcm(&g, &OrderingConfig::with_seed(RngSeed(1))).unwrap().arrangement;
    assert_eq!(max_cutwidth(&g, &order).unwrap(), 1);
    let est = estimate_threshold(&g, &order, 1.0, 1, &ProbeSettings::default(), 0.05, RngSeed(4)).unwrap();
    assert!(est.bracket.1 <= 5.0, "{:?}", est.bracket);
}

#[test]
fn more_budget_never_raises_threshold() {
    let g = gen_erdos_renyi(30, 0.15, RngSeed(9)).unwrap();
    let order = LinearArrangement::identity(30);
    let settings = ProbeSettings {
        n_runs: 60,
        ..Default::default()
    };
    let tol = 0.5;
    let one = estimate_threshold(&g, &order, 5.0, 1, &settings, tol, RngSeed(6)).unwrap();
    let three = estimate_threshold(&g, &order, 5.0, 3, &settings, tol, RngSeed(6)).unwrap();
    assert!(three.e_star <= one.e_star + tol, "{} vs {}", three.e_star, one.e_star);
}
