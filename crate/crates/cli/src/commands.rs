use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cutplan::arrangement::{cutwidth_profile, max_cutwidth, p_sum_cost, LinearArrangement};
use cutplan::bounds::{estimate_threshold, theorem1_bound, BoundReport, ProbeSettings};
use cutplan::epidemic::{
    run_ensemble, simulate as simulate_one, BudgetSchedule, DiffusionParams, EpidemicState, InitialCondition,
    SimConfig, Strategy,
};
use cutplan::graph::{load_edge_list, write_edge_list};
use cutplan::{Graph, RngSeed};

use crate::catalog::{build_order, ModelParams, OrderOptions};
use crate::output::{csv_bytes, ensure_dir, opt_real, real, write_atomic, Staged};
use crate::{BoundArgs, GenArgs, OrderArgs, SimulateArgs, ThresholdArgs};

pub fn load_graph(path: &Path) -> Result<Graph> {
    let (g, report) = load_edge_list(path)?;
    if report.duplicates_collapsed > 0 {
        log::info!("{}: collapsed {} duplicate edge(s)", path.display(), report.duplicates_collapsed);
    }
    Ok(g)
}

pub fn load_order(path: &Path, graph: &Graph) -> Result<LinearArrangement> {
    let la = LinearArrangement::load(path)?;
    la.check_graph(graph)
        .with_context(|| format!("order {} does not match the graph", path.display()))?;
    Ok(la)
}

pub fn gen(a: GenArgs) -> Result<()> {
    let params = ModelParams {
        n: a.n,
        p: a.p,
        m: a.m,
        k: a.k,
        beta: a.beta,
        radius: a.radius,
        rows: a.rows,
        cols: a.cols,
    };
    let g = params.generate(a.model, RngSeed(a.seed))?;
    let header = vec![format!("model={} {} seed={}", a.model.name(), params.describe(a.model), a.seed)];
    let mut buf = Vec::new();
    write_edge_list(&g, &header, &mut buf)?;
    write_atomic(&a.out, &buf)?;
    println!("nodes={} edges={}", g.n_nodes(), g.n_edges());
    Ok(())
}

pub fn profile_csv(graph: &Graph, la: &LinearArrangement) -> Result<Vec<u8>> {
    if graph.n_nodes() < 2 {
        return csv_bytes(&["location", "cut"], Vec::<Vec<String>>::new());
    }
    Ok(cutwidth_profile(graph, la)?.to_csv().into_bytes())
}

pub fn order(a: OrderArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let opts = OrderOptions {
        clusters: a.clusters,
        swap_iterations: a.swap_iterations,
        p: a.p,
        lrsr_every: a.lrsr_every,
    };
    let la = build_order(&g, a.strategy, RngSeed(a.seed), &opts)?;
    let c_max = if g.n_nodes() >= 2 { max_cutwidth(&g, &la)? } else { 0 };
    let p_sum = p_sum_cost(&g, &la, a.p.max(1))?;
    let profile_path = a.profile.clone().unwrap_or_else(|| {
        let mut s = a.out.clone().into_os_string();
        s.push(".cuts.csv");
        PathBuf::from(s)
    });
    let mut staged = Staged::default();
    staged.add(a.out.clone(), la.to_text().into_bytes());
    staged.add(profile_path, profile_csv(&g, &la)?);
    staged.commit()?;
    println!("max_cutwidth={c_max} p_sum={}", real(p_sum));
    Ok(())
}

/// `"5"` or `"0:1,10:5"`.
pub fn parse_budget(s: &str) -> Result<BudgetSchedule> {
    let s = s.trim();
    if let Ok(b) = s.parse::<usize>() {
        return Ok(BudgetSchedule::Constant(b));
    }
    let mut steps = Vec::new();
    for part in s.split(',') {
        let (t, b) = part
            .split_once(':')
            .with_context(|| format!("budget step `{part}` is not of the form time:count"))?;
        let t: f64 = t.trim().parse().with_context(|| format!("bad time in budget step `{part}`"))?;
        let b: usize = b.trim().parse().with_context(|| format!("bad count in budget step `{part}`"))?;
        steps.push((t, b));
    }
    Ok(BudgetSchedule::Piecewise(steps))
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let strategy = match &a.order {
        Some(p) => Strategy::PriorityPlanning(load_order(p, &g)?),
        None => Strategy::None,
    };
    let params = DiffusionParams::new(a.beta, a.delta, a.rho, parse_budget(&a.budget)?)?;
    let initial = match &a.infected {
        Some(nodes) => InitialCondition::State(EpidemicState::from_nodes(&g, nodes)?),
        None => InitialCondition::AllInfected,
    };
    let mut config = SimConfig::for_graph(&g, &params);
    if let Some(h) = a.horizon {
        config.horizon = h;
    }
    config.sample_dt = a.sample_dt;
    let seed = RngSeed(a.seed);
    let summary = run_ensemble(&g, &params, &strategy, &initial, a.runs, seed, &config)?;

    ensure_dir(&a.out_dir)?;
    let mut staged = Staged::default();
    staged.add(
        a.out_dir.join("runs.csv"),
        csv_bytes(
            &["run", "seed", "extinct", "extinction_time", "tau_or_horizon", "n_events", "peak_infected"],
            summary.runs.iter().enumerate().map(|(i, r)| {
                vec![
                    i.to_string(),
                    r.seed.to_string(),
                    (r.extinction_time.is_some() as u8).to_string(),
                    opt_real(r.extinction_time),
                    real(r.tau_or_horizon),
                    r.n_events.to_string(),
                    r.peak_infected.to_string(),
                ]
            }),
        )?,
    );
    staged.add(
        a.out_dir.join("summary.csv"),
        csv_bytes(
            &["n_runs", "n_extinct", "extinction_fraction", "mean_tau", "median_tau", "tau_std_error", "horizon"],
            [vec![
                summary.n_runs.to_string(),
                summary.n_extinct.to_string(),
                real(summary.extinction_fraction),
                real(summary.mean_tau),
                real(summary.median_tau),
                real(summary.tau_std_error),
                real(config.horizon),
            ]],
        )?,
    );
    if config.sample_dt.is_some() {
        staged.add(
            a.out_dir.join("trajectory.csv"),
            csv_bytes(
                &["time", "infected_count"],
                summary.runs[0].samples.iter().map(|&(t, c)| vec![real(t), c.to_string()]),
            )?,
        );
        staged.add(
            a.out_dir.join("curve.csv"),
            csv_bytes(
                &["time", "mean_infected"],
                summary.mean_curve.iter().map(|&(t, m)| vec![real(t), real(m)]),
            )?,
        );
    }
    if a.events {
        let cfg = SimConfig {
            record_events: true,
            ..config.clone()
        };
        let tr = simulate_one(&g, &params, &strategy, &initial, seed, &cfg)?;
        staged.add(
            a.out_dir.join("events.csv"),
            csv_bytes(
                &["time", "node", "kind"],
                tr.events
                    .iter()
                    .map(|e| vec![real(e.time), e.node.to_string(), e.kind.as_str().to_string()]),
            )?,
        );
    }
    staged.commit()?;
    println!(
        "extinction_fraction={} mean_tau={} tau_std_error={}",
        real(summary.extinction_fraction),
        real(summary.mean_tau),
        real(summary.tau_std_error)
    );
    Ok(())
}

pub fn threshold(a: ThresholdArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let order = match (&a.order, a.strategy) {
        (Some(p), _) => load_order(p, &g)?,
        (None, Some(kind)) => build_order(&g, kind, RngSeed(a.seed).derive("order"), &OrderOptions::default())?,
        (None, None) => bail!("either --order or --strategy is required"),
    };
    let settings = ProbeSettings {
        n_runs: a.runs,
        horizon_multiplier: a.horizon_mult,
        success_fraction: a.success,
        cap_factor: a.cap_factor,
    };
    let est = estimate_threshold(&g, &order, a.r, a.budget, &settings, a.tol, RngSeed(a.seed))?;
    ensure_dir(&a.out_dir)?;
    let mut staged = Staged::default();
    staged.add(
        a.out_dir.join("threshold.csv"),
        csv_bytes(
            &[
                "e_star",
                "e_low",
                "e_high",
                "c_max",
                "naive_bound",
                "r",
                "b_tot",
                "n_runs",
                "horizon_multiplier",
                "success_fraction",
            ],
            [vec![
                real(est.e_star),
                real(est.bracket.0),
                real(est.bracket.1),
                est.c_max.to_string(),
                real(est.naive_threshold),
                real(a.r),
                a.budget.to_string(),
                a.runs.to_string(),
                real(a.horizon_mult),
                real(a.success),
            ]],
        )?,
    );
    staged.add(
        a.out_dir.join("probes.csv"),
        csv_bytes(
            &["e", "extinction_fraction", "mean_tau", "runs_done", "extinct", "success"],
            est.probes.iter().map(|p| {
                vec![
                    real(p.e),
                    real(p.extinction_fraction),
                    real(p.mean_tau),
                    p.runs_done.to_string(),
                    p.extinct.to_string(),
                    (p.success as u8).to_string(),
                ]
            }),
        )?,
    );
    staged.commit()?;
    println!(
        "e_star={} e_low={} e_high={} c_max={} naive_bound={}",
        real(est.e_star),
        real(est.bracket.0),
        real(est.bracket.1),
        est.c_max,
        real(est.naive_threshold)
    );
    Ok(())
}

pub const BOUND_HEADER: [&str; 15] = [
    "n",
    "d_max",
    "c_max",
    "beta",
    "delta",
    "rho",
    "b_tot",
    "epsilon",
    "inflation",
    "required_rho",
    "condition_holds",
    "extinction_bound",
    "corollary_threshold",
    "naive_threshold",
    "degenerate",
];

#[allow(clippy::too_many_arguments)]
pub fn bound_row(n: usize, d_max: usize, c_max: u32, beta: f64, delta: f64, rho: f64, b_tot: usize, rep: &BoundReport) -> Vec<String> {
    vec![
        n.to_string(),
        d_max.to_string(),
        c_max.to_string(),
        real(beta),
        real(delta),
        real(rho),
        b_tot.to_string(),
        real(rep.epsilon),
        real(rep.inflation),
        real(rep.required_rho),
        rep.condition_holds.to_string(),
        opt_real(rep.extinction_bound),
        real(rep.corollary_threshold),
        real(rep.naive_threshold),
        rep.degenerate.to_string(),
    ]
}

pub fn bound(a: BoundArgs) -> Result<()> {
    let (n, d_max, c_max) = match (&a.graph, &a.order) {
        (Some(gp), Some(op)) => {
            let g = load_graph(gp)?;
            let la = load_order(op, &g)?;
            let c = if g.n_nodes() >= 2 { max_cutwidth(&g, &la)? } else { 0 };
            (g.n_nodes(), g.max_degree(), c)
        }
        _ => (
            a.n.context("--n is required")?,
            a.d_max.context("--d-max is required")?,
            a.c_max.context("--c-max is required")?,
        ),
    };
    let rep = theorem1_bound(n, d_max, c_max, a.beta, a.delta, a.rho, a.budget)?;
    let row = bound_row(n, d_max, c_max, a.beta, a.delta, a.rho, a.budget, &rep);
    let width = BOUND_HEADER.iter().map(|h| h.len()).max().unwrap_or(0);
    for (h, v) in BOUND_HEADER.iter().zip(&row) {
        let v = if v.is_empty() { "condition not met" } else { v.as_str() };
        println!("{h:<width$}  {v}");
    }
    if a.budget > 1 {
        println!("note: the bound assumes b = 1; naive_threshold for b_tot > 1 is a heuristic scaling");
    }
    if let Some(out) = &a.out {
        write_atomic(out, &csv_bytes(&BOUND_HEADER, [row])?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_forms() {
        assert_eq!(parse_budget("5").unwrap(), BudgetSchedule::Constant(5));
        assert_eq!(
            parse_budget("0:1, 2.5:4").unwrap(),
            BudgetSchedule::Piecewise(vec![(0.0, 1), (2.5, 4)])
        );
        assert!(parse_budget("0-1").is_err());
        assert!(parse_budget("x:1").is_err());
    }
}
