//! End-to-end experiment runs. Every task draws its seed from the master
//! seed and a label naming the task, and results are emitted in task order.

use anyhow::Result;
use cutplan::arrangement::{max_cutwidth, LinearArrangement};
use cutplan::bounds::{estimate_threshold, theorem1_for_plan, ProbeSettings};
use cutplan::epidemic::{run_ensemble, BudgetSchedule, DiffusionParams, InitialCondition, SimConfig, Strategy};
use cutplan::{Graph, RngSeed};
use rayon::prelude::*;

use crate::catalog::{build_order, StrategyKind};
use crate::config::{self, ExperimentConfig, ExperimentKind};
use crate::output::{csv_bytes, ensure_dir, real, Staged};
use crate::ExperimentArgs;

struct Network {
    label: String,
    seed: u64,
    graph: Graph,
}

struct Plan<'a> {
    net: &'a Network,
    strategy: StrategyKind,
    order: LinearArrangement,
    c_max: u32,
}

impl Plan<'_> {
    fn label(&self) -> String {
        format!("{}/{}", self.net.label, self.strategy.name())
    }
}

fn build_networks(cfg: &ExperimentConfig, master: RngSeed) -> Result<Vec<Network>> {
    let specs: Vec<(String, usize)> = cfg
        .networks
        .iter()
        .flat_map(|src| (0..cfg.instances).map(move |i| (src, i)))
        .map(|(src, i)| (format!("{}/{i}", src.label()), cfg.networks.iter().position(|s| s == src).unwrap()))
        .collect();
    specs
        .par_iter()
        .map(|(label, idx)| {
            let seed = master.derive(&format!("network/{label}"));
            let graph = cfg.networks[*idx].build(&cfg.model_params, seed)?;
            Ok(Network {
                label: label.clone(),
                seed: seed.0,
                graph,
            })
        })
        .collect()
}

fn build_plans<'a>(cfg: &ExperimentConfig, nets: &'a [Network], master: RngSeed) -> Result<Vec<Plan<'a>>> {
    let tasks: Vec<(&Network, StrategyKind)> = nets
        .iter()
        .flat_map(|n| cfg.strategies.iter().map(move |&s| (n, s)))
        .collect();
    tasks
        .par_iter()
        .map(|&(net, strategy)| {
            let seed = master.derive(&format!("order/{}/{}", net.label, strategy.name()));
            let order = build_order(&net.graph, strategy, seed, &cfg.order_options)?;
            let c_max = if net.graph.n_nodes() >= 2 { max_cutwidth(&net.graph, &order)? } else { 0 };
            Ok(Plan {
                net,
                strategy,
                order,
                c_max,
            })
        })
        .collect()
}

fn network_type(net: &Network) -> &str {
    net.label.rsplit_once('/').map_or(&net.label, |(t, _)| t)
}

pub fn run(a: ExperimentArgs) -> Result<()> {
    let mut cfg = config::load(&a.config)?;
    if let Some(d) = a.out_dir {
        cfg.out_dir = d;
    }
    if cfg.out_dir.as_os_str().is_empty() {
        anyhow::bail!("experiment.out_dir: required (or pass --out-dir)");
    }
    let staged = execute(&cfg)?;
    ensure_dir(&cfg.out_dir)?;
    staged.commit()?;
    println!("wrote {}", cfg.out_dir.join(format!("{}.csv", cfg.kind.name())).display());
    Ok(())
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Staged> {
    let master = RngSeed(cfg.seed);
    let nets = build_networks(cfg, master)?;
    let plans = build_plans(cfg, &nets, master)?;
    let mut staged = Staged::default();
    let path = cfg.out_dir.join(format!("{}.csv", cfg.kind.name()));
    match cfg.kind {
        ExperimentKind::ThresholdVsCutwidth => staged.add(path, threshold_vs_cutwidth(cfg, &plans, master)?),
        ExperimentKind::StrategyComparison => {
            let (curves, summary) = strategy_comparison(cfg, &plans, master)?;
            staged.add(path, curves);
            staged.add(cfg.out_dir.join("strategy_summary.csv"), summary);
        }
        ExperimentKind::BoundCheck => staged.add(path, bound_check(cfg, &plans, master)?),
    }
    Ok(staged)
}

fn threshold_vs_cutwidth(cfg: &ExperimentConfig, plans: &[Plan], master: RngSeed) -> Result<Vec<u8>> {
    let settings = ProbeSettings {
        n_runs: cfg.probe.runs,
        horizon_multiplier: cfg.probe.horizon_multiplier,
        success_fraction: cfg.probe.success_fraction,
        cap_factor: cfg.probe.cap_factor,
    };
    let tasks: Vec<(&Plan, f64)> = plans.iter().flat_map(|p| cfg.r.iter().map(move |&r| (p, r))).collect();
    let rows: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|&(plan, r)| {
            let naive = r * plan.c_max as f64 / cfg.budget as f64;
            let tol = cfg.probe.tol.unwrap_or_else(|| (cfg.probe.rel_tol * naive).max(1e-3));
            let seed = master.derive(&format!("threshold/{}/r={r}", plan.label()));
            let est = estimate_threshold(&plan.net.graph, &plan.order, r, cfg.budget, &settings, tol, seed)?;
            Ok(vec![
                network_type(plan.net).to_string(),
                plan.net.seed.to_string(),
                plan.strategy.name().to_string(),
                real(r),
                cfg.budget.to_string(),
                plan.c_max.to_string(),
                real(est.e_star),
                real(est.bracket.0),
                real(est.bracket.1),
                real(est.naive_threshold),
            ])
        })
        .collect::<Result<_>>()?;
    csv_bytes(
        &["network_type", "seed", "strategy", "r", "b_tot", "c_max", "e_star", "e_low", "e_high", "naive_bound"],
        rows,
    )
}

fn sim_config(cfg: &ExperimentConfig, graph: &Graph, params: &DiffusionParams) -> SimConfig {
    let mut sc = SimConfig::for_graph(graph, params);
    if let Some(h) = cfg.horizon {
        sc.horizon = h;
    }
    sc.sample_dt = cfg.sample_dt;
    sc
}

fn strategy_comparison(cfg: &ExperimentConfig, plans: &[Plan], master: RngSeed) -> Result<(Vec<u8>, Vec<u8>)> {
    let tasks: Vec<(&Plan, f64, f64)> = plans
        .iter()
        .flat_map(|p| cfg.beta.iter().flat_map(move |&b| cfg.rho.iter().map(move |&r| (p, b, r))))
        .collect();
    let results: Vec<(Vec<Vec<String>>, Vec<String>)> = tasks
        .par_iter()
        .map(|&(plan, beta, rho)| {
            let params = DiffusionParams::new(beta, cfg.delta, rho, BudgetSchedule::Constant(cfg.budget))?;
            let sc = sim_config(cfg, &plan.net.graph, &params);
            let seed = master.derive(&format!("simulate/{}/beta={beta}/rho={rho}", plan.label()));
            let s = run_ensemble(
                &plan.net.graph,
                &params,
                &Strategy::PriorityPlanning(plan.order.clone()),
                &InitialCondition::AllInfected,
                cfg.sim_runs,
                seed,
                &sc,
            )?;
            let head = [
                network_type(plan.net).to_string(),
                plan.net.seed.to_string(),
                plan.strategy.name().to_string(),
                real(beta),
                real(rho),
            ];
            let curve = s
                .mean_curve
                .iter()
                .map(|&(t, m)| head.iter().cloned().chain([real(t), real(m)]).collect())
                .collect();
            let summary = head
                .iter()
                .cloned()
                .chain([
                    plan.c_max.to_string(),
                    real(s.extinction_fraction),
                    real(s.mean_tau),
                    real(s.tau_std_error),
                ])
                .collect();
            Ok((curve, summary))
        })
        .collect::<Result<_>>()?;
    let head = ["network_type", "seed", "strategy", "beta", "rho"];
    let curves = csv_bytes(
        &[&head[..], &["time", "mean_infected"]].concat(),
        results.iter().flat_map(|(c, _)| c.iter().cloned()),
    )?;
    let summary = csv_bytes(
        &[&head[..], &["c_max", "extinction_fraction", "mean_tau", "tau_std_error"]].concat(),
        results.into_iter().map(|(_, s)| s),
    )?;
    Ok((curves, summary))
}

fn bound_check(cfg: &ExperimentConfig, plans: &[Plan], master: RngSeed) -> Result<Vec<u8>> {
    let tasks: Vec<(&Plan, f64, f64)> = plans
        .iter()
        .flat_map(|p| cfg.beta.iter().flat_map(move |&b| cfg.rho.iter().map(move |&r| (p, b, r))))
        .collect();
    let rows: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|&(plan, beta, rho)| {
            let g = &plan.net.graph;
            let params = DiffusionParams::new(beta, cfg.delta, rho, BudgetSchedule::Constant(cfg.budget))?;
            let rep = theorem1_for_plan(g, &plan.order, &params, cfg.budget)?;
            let sc = SimConfig {
                sample_dt: None,
                ..sim_config(cfg, g, &params)
            };
            let seed = master.derive(&format!("bound/{}/beta={beta}/rho={rho}", plan.label()));
            let s = run_ensemble(
                g,
                &params,
                &Strategy::PriorityPlanning(plan.order.clone()),
                &InitialCondition::AllInfected,
                cfg.sim_runs,
                seed,
                &sc,
            )?;
            Ok(vec![
                network_type(plan.net).to_string(),
                plan.net.seed.to_string(),
                plan.strategy.name().to_string(),
                g.n_nodes().to_string(),
                g.max_degree().to_string(),
                plan.c_max.to_string(),
                real(beta),
                real(cfg.delta),
                real(rho),
                cfg.budget.to_string(),
                real(s.mean_tau),
                real(s.tau_std_error),
                real(s.extinction_fraction),
                rep.extinction_bound.map(real).unwrap_or_default(),
                rep.condition_holds.to_string(),
            ])
        })
        .collect::<Result<_>>()?;
    csv_bytes(
        &[
            "network_type",
            "seed",
            "strategy",
            "n",
            "d_max",
            "c_max",
            "beta",
            "delta",
            "rho",
            "b_tot",
            "empirical_mean_tau",
            "tau_std_error",
            "extinction_fraction",
            "theorem_bound",
            "condition_holds",
        ],
        rows,
    )
}
