//! Monte Carlo ensembles over independent seeds.
//!
//! Run `i` always uses seed `base + i`, and per-run results are merged in
//! run order, so the summaries do not depend on how rayon schedules work.

use rayon::prelude::*;

use super::sim::{simulate, InitialCondition, SimConfig};
use super::{DiffusionParams, Strategy};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng::RngSeed;

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub extinction_time: Option<f64>,
    pub tau_or_horizon: f64,
    pub n_events: u64,
    pub peak_infected: usize,
    pub samples: Vec<(f64, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub n_runs: usize,
    pub n_extinct: usize,
    pub extinction_fraction: f64,
    /// Mean of `min(τ, horizon)` over all runs.
    pub mean_tau: f64,
    pub median_tau: f64,
    /// Standard error of `mean_tau`.
    pub tau_std_error: f64,
    pub mean_peak_infected: f64,
    /// `(t, mean infected count)` on the sampling grid; extinct runs count 0.
    pub mean_curve: Vec<(f64, f64)>,
    pub runs: Vec<RunRecord>,
}

fn run_one(
    graph: &Graph,
    params: &DiffusionParams,
    strategy: &Strategy,
    initial: &InitialCondition,
    seed: RngSeed,
    config: &SimConfig,
) -> Result<RunRecord> {
    let quiet = SimConfig {
        record_events: false,
        ..config.clone()
    };
    let tr = simulate(graph, params, strategy, initial, seed, &quiet)?;
    Ok(RunRecord {
        seed: seed.0,
        extinction_time: tr.extinction_time,
        tau_or_horizon: tr.tau_or_horizon(),
        n_events: tr.n_events,
        peak_infected: tr.peak_infected,
        samples: tr.samples,
    })
}

/// Mean, sample standard deviation / √n, and median of `xs`.
pub(crate) fn mean_se_median(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    (mean, (var / n).sqrt(), median)
}

pub fn run_ensemble(
    graph: &Graph,
    params: &DiffusionParams,
    strategy: &Strategy,
    initial: &InitialCondition,
    n_runs: usize,
    base_seed: RngSeed,
    config: &SimConfig,
) -> Result<EnsembleSummary> {
    if n_runs == 0 {
        return Err(crate::Error::param("n_runs", "must be at least 1"));
    }
    let runs: Vec<RunRecord> = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| run_one(graph, params, strategy, initial, base_seed.offset(i), config))
        .collect::<Result<_>>()?;
    Ok(summarize(runs))
}

fn summarize(runs: Vec<RunRecord>) -> EnsembleSummary {
    let n = runs.len();
    let taus: Vec<f64> = runs.iter().map(|r| r.tau_or_horizon).collect();
    let (mean_tau, tau_std_error, median_tau) = mean_se_median(&taus);
    let n_extinct = runs.iter().filter(|r| r.extinction_time.is_some()).count();
    let grid_len = runs.iter().map(|r| r.samples.len()).max().unwrap_or(0);
    let mut mean_curve: Vec<(f64, f64)> = Vec::with_capacity(grid_len);
    for k in 0..grid_len {
        let t = runs
            .iter()
            .find_map(|r| r.samples.get(k).map(|s| s.0))
            .unwrap_or_default();
        let total: f64 = runs
            .iter()
            .map(|r| r.samples.get(k).map_or(0.0, |s| s.1 as f64))
            .sum();
        mean_curve.push((t, total / n as f64));
    }
    EnsembleSummary {
        n_runs: n,
        n_extinct,
        extinction_fraction: n_extinct as f64 / n as f64,
        mean_tau,
        median_tau,
        tau_std_error,
        mean_peak_infected: runs.iter().map(|r| r.peak_infected as f64).sum::<f64>() / n as f64,
        mean_curve,
        runs,
    }
}

/// Result of a pass/fail extinction probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    /// Runs actually simulated before the verdict was certain.
    pub runs_done: usize,
    pub extinct: usize,
    pub success: bool,
    /// Mean `min(τ, horizon)` over the simulated runs.
    pub mean_tau: f64,
}

impl ProbeOutcome {
    pub fn extinction_fraction(&self) -> f64 {
        self.extinct as f64 / self.runs_done as f64
    }
}

const PROBE_BATCH: usize = 32;

/// Decides whether at least `success_fraction · n_runs` of `n_runs` runs go
/// extinct before `config.horizon`. Runs are simulated in fixed batches and
/// the probe stops as soon as the verdict can no longer change; the verdict
/// always equals the one the full ensemble would give.
#[allow(clippy::too_many_arguments)]
pub fn run_probe(
    graph: &Graph,
    params: &DiffusionParams,
    strategy: &Strategy,
    initial: &InitialCondition,
    n_runs: usize,
    success_fraction: f64,
    base_seed: RngSeed,
    config: &SimConfig,
) -> Result<ProbeOutcome> {
    if n_runs == 0 {
        return Err(crate::Error::param("n_runs", "must be at least 1"));
    }
    let needed = ((success_fraction * n_runs as f64) - 1e-9).ceil().max(0.0) as usize;
    let quiet = SimConfig {
        sample_dt: None,
        record_events: false,
        ..config.clone()
    };
    let (mut done, mut extinct, mut tau_sum) = (0usize, 0usize, 0.0);
    while done < n_runs {
        if extinct >= needed || extinct + (n_runs - done) < needed {
            break;
        }
        let end = (done + PROBE_BATCH).min(n_runs);
        let batch: Vec<(bool, f64)> = (done..end)
            .into_par_iter()
            .map(|i| {
                simulate(graph, params, strategy, initial, base_seed.offset(i as u64), &quiet)
                    .map(|t| (t.is_extinct(), t.tau_or_horizon()))
            })
            .collect::<Result<_>>()?;
        for (ext, tau) in batch {
            extinct += ext as usize;
            tau_sum += tau;
        }
        done = end;
    }
    Ok(ProbeOutcome {
        runs_done: done,
        extinct,
        success: extinct >= needed,
        mean_tau: if done > 0 { tau_sum / done as f64 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::LinearArrangement;
    use crate::epidemic::{BudgetSchedule, EpidemicState};
    use crate::graph::gen_erdos_renyi;

    #[test]
    fn single_run_summary_matches_trajectory() {
        let g = gen_erdos_renyi(20, 0.2, RngSeed(1)).unwrap();
        let params = DiffusionParams::normalized(0.5, 3.0, 1).unwrap();
        let strat = Strategy::PriorityPlanning(LinearArrangement::identity(20));
        let cfg = SimConfig {
            sample_dt: Some(1.0),
            ..SimConfig::with_horizon(500.0)
        };
        let s = run_ensemble(&g, &params, &strat, &InitialCondition::AllInfected, 1, RngSeed(7), &cfg).unwrap();
        let t = simulate(&g, &params, &strat, &InitialCondition::AllInfected, RngSeed(7), &cfg).unwrap();
        assert_eq!(s.mean_tau, t.tau_or_horizon());
        assert_eq!(s.median_tau, t.tau_or_horizon());
        assert_eq!(s.n_extinct, t.is_extinct() as usize);
        assert_eq!(s.mean_curve.len(), t.samples.len());
        assert_eq!(s.tau_std_error, 0.0);
    }

    #[test]
    fn no_spread_dies_before_horizon() {
        // P(max of 10 Exp(1) > 20) = 1 - (1 - e^-20)^10 ~ 2e-8.
        let g = Graph::empty(10);
        let params = DiffusionParams::new(0.0, 1.0, 0.0, BudgetSchedule::Constant(0)).unwrap();
        let s = run_ensemble(&g, &params, &Strategy::None, &InitialCondition::AllInfected, 2000, RngSeed(3), &SimConfig::with_horizon(20.0)).unwrap();
        assert!(s.extinction_fraction >= 0.99);
    }

    #[test]
    fn repeatable_summary() {
        let g = gen_erdos_renyi(30, 0.1, RngSeed(2)).unwrap();
        let params = DiffusionParams::normalized(1.0, 2.0, 2).unwrap();
        let strat = Strategy::PriorityPlanning(LinearArrangement::identity(30));
        let init = InitialCondition::State(EpidemicState::from_nodes(&g, &[0, 5, 9]).unwrap());
        let cfg = SimConfig {
            sample_dt: Some(0.5),
            ..SimConfig::with_horizon(100.0)
        };
        let a = run_ensemble(&g, &params, &strat, &init, 64, RngSeed(11), &cfg).unwrap();
        let b = run_ensemble(&g, &params, &strat, &init, 64, RngSeed(11), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn probe_verdict_matches_full_ensemble() {
        let g = gen_erdos_renyi(25, 0.2, RngSeed(5)).unwrap();
        let strat = Strategy::PriorityPlanning(LinearArrangement::identity(25));
        let cfg = SimConfig::with_horizon(50.0);
        for e in [0.5, 2.0, 6.0, 20.0] {
            let params = DiffusionParams::normalized(1.0, e, 1).unwrap();
            let full = run_ensemble(&g, &params, &strat, &InitialCondition::AllInfected, 100, RngSeed(1), &cfg).unwrap();
            let probe = run_probe(&g, &params, &strat, &InitialCondition::AllInfected, 100, 0.8, RngSeed(1), &cfg).unwrap();
            assert_eq!(probe.success, full.n_extinct >= 80, "e={e}");
            assert!(probe.runs_done <= 100);
        }
    }

    #[test]
    fn stats_helper() {
        let (m, se, med) = mean_se_median(&[1.0, 2.0, 3.0, 10.0]);
        assert_eq!(m, 4.0);
        assert_eq!(med, 2.5);
        assert!((se - (50.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
    }
}
