//! Simulated annealing over pairwise node swaps.

use rand::Rng as _;

use super::{cutwidth_profile, LinearArrangement};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngSeed;

/// Quantity minimized by the swap search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `Σ |ℓ(u) − ℓ(v)|^p` over edges (the p-th root is monotone and omitted).
    PSum { p: u32 },
    MaxCutwidth,
}

impl Default for Objective {
    fn default() -> Self {
        Objective::PSum { p: 1 }
    }
}

/// Geometric cooling schedule. `None` fields take size-dependent defaults:
/// the initial temperature is the mean edge length of the starting
/// arrangement and each level runs `100·N` swaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub initial_temperature: Option<f64>,
    pub cooling: f64,
    pub steps_per_temperature: Option<usize>,
    /// The chain stops once `T < final_ratio · T0`.
    pub final_ratio: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            initial_temperature: None,
            cooling: 0.97,
            steps_per_temperature: None,
            final_ratio: 1e-3,
        }
    }
}

/// Tunables of the ordering pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingConfig {
    /// `None` picks `⌈√N / 2⌉`.
    pub n_clusters: Option<usize>,
    /// Hard cap on the number of proposed swaps per annealing run.
    pub swap_iterations: Option<usize>,
    pub annealing: AnnealSchedule,
    pub objective: Objective,
    pub seed: RngSeed,
}

impl Default for OrderingConfig {
    fn default() -> Self {
        OrderingConfig {
            n_clusters: None,
            swap_iterations: None,
            annealing: AnnealSchedule::default(),
            objective: Objective::default(),
            seed: RngSeed(0),
        }
    }
}

impl OrderingConfig {
    pub fn with_seed(seed: RngSeed) -> Self {
        OrderingConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.annealing;
        if !(s.cooling > 0.0 && s.cooling < 1.0) {
            return Err(Error::param("cooling", format!("{} not in (0, 1)", s.cooling)));
        }
        if !(s.final_ratio > 0.0 && s.final_ratio < 1.0) {
            return Err(Error::param("final_ratio", format!("{} not in (0, 1)", s.final_ratio)));
        }
        if s.initial_temperature.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::param("initial_temperature", "must be positive"));
        }
        if s.steps_per_temperature == Some(0) {
            return Err(Error::param("steps_per_temperature", "must be positive"));
        }
        if self.n_clusters == Some(0) {
            return Err(Error::param("n_clusters", "must be positive"));
        }
        if let Objective::PSum { p: 0 } = self.objective {
            return Err(Error::param("p", "must be at least 1"));
        }
        Ok(())
    }
}

/// Incremental objective state for one arrangement.
trait SwapCost {
    fn cost(&self) -> f64;
    /// Change in cost if `u` and `v` traded places.
    fn delta(&mut self, la: &LinearArrangement, u: usize, v: usize) -> f64;
    /// Applies the swap most recently passed to `delta`.
    fn commit(&mut self, la: &LinearArrangement, u: usize, v: usize, delta: f64);
}

struct PSumCost<'g> {
    graph: &'g Graph,
    p: i32,
    total: f64,
}

impl PSumCost<'_> {
    fn side(&self, la: &LinearArrangement, moving: usize, other: usize, from: usize, to: usize) -> f64 {
        let mut d = 0.0;
        for &w in self.graph.neighbors(moving) {
            let w = w as usize;
            if w == other {
                continue;
            }
            let sw = la.slot(w);
            d += (to.abs_diff(sw) as f64).powi(self.p) - (from.abs_diff(sw) as f64).powi(self.p);
        }
        d
    }
}

impl SwapCost for PSumCost<'_> {
    fn cost(&self) -> f64 {
        self.total
    }

    fn delta(&mut self, la: &LinearArrangement, u: usize, v: usize) -> f64 {
        let (su, sv) = (la.slot(u), la.slot(v));
        self.side(la, u, v, su, sv) + self.side(la, v, u, sv, su)
    }

    fn commit(&mut self, _: &LinearArrangement, _: usize, _: usize, delta: f64) {
        self.total += delta;
    }
}

/// Cut array kept in sync with the arrangement; a swap rewrites the spans
/// of edges at the two moved nodes.
struct CutCost<'g> {
    graph: &'g Graph,
    cuts: Vec<i64>,
    max: i64,
    trial: Vec<i64>,
    trial_max: i64,
}

impl<'g> CutCost<'g> {
    fn new(graph: &'g Graph, la: &LinearArrangement) -> Self {
        let cuts: Vec<i64> = if graph.n_nodes() < 2 {
            Vec::new()
        } else {
            cutwidth_profile(graph, la).unwrap().cuts.iter().map(|&c| c as i64).collect()
        };
        let max = cuts.iter().copied().max().unwrap_or(0);
        CutCost {
            graph,
            trial: cuts.clone(),
            cuts,
            max,
            trial_max: max,
        }
    }

    fn add_span(cuts: &mut [i64], a: usize, b: usize, sign: i64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for c in &mut cuts[lo..hi] {
            *c += sign;
        }
    }
}

impl SwapCost for CutCost<'_> {
    fn cost(&self) -> f64 {
        self.max as f64
    }

    fn delta(&mut self, la: &LinearArrangement, u: usize, v: usize) -> f64 {
        self.trial.copy_from_slice(&self.cuts);
        let (su, sv) = (la.slot(u), la.slot(v));
        for (moving, other, from, to) in [(u, v, su, sv), (v, u, sv, su)] {
            for &w in self.graph.neighbors(moving) {
                let w = w as usize;
                if w == other {
                    continue;
                }
                let sw = la.slot(w);
                Self::add_span(&mut self.trial, from, sw, -1);
                Self::add_span(&mut self.trial, to, sw, 1);
            }
        }
        self.trial_max = self.trial.iter().copied().max().unwrap_or(0);
        (self.trial_max - self.max) as f64
    }

    fn commit(&mut self, _: &LinearArrangement, _: usize, _: usize, _: f64) {
        std::mem::swap(&mut self.cuts, &mut self.trial);
        self.max = self.trial_max;
    }
}

fn max_cut(graph: &Graph, la: &LinearArrangement) -> u32 {
    if graph.n_nodes() < 2 {
        0
    } else {
        cutwidth_profile(graph, la).unwrap().max_cut
    }
}

/// Anneals `la` by swapping two uniformly chosen nodes per step.
///
/// Downhill and neutral moves are always taken, uphill moves with
/// probability `exp(−Δ/T)`. Returns the best arrangement seen under the
/// configured objective; among equal-cost states the one with the smaller
/// maximum cutwidth is kept (checked whenever the chain leaves a best-cost
/// state and at the end).
pub fn local_search_swaps(
    graph: &Graph,
    la: &LinearArrangement,
    config: &OrderingConfig,
) -> Result<LinearArrangement> {
    config.validate()?;
    la.check_graph(graph)?;
    let n = graph.n_nodes();
    if n < 2 || graph.n_edges() == 0 || config.swap_iterations == Some(0) {
        return Ok(la.clone());
    }
    match config.objective {
        Objective::PSum { p } => {
            let total = graph
                .edges()
                .iter()
                .map(|&(u, v)| (la.slot(u as usize).abs_diff(la.slot(v as usize)) as f64).powi(p as i32))
                .sum();
            anneal(graph, la, config, PSumCost { graph, p: p as i32, total })
        }
        Objective::MaxCutwidth => anneal(graph, la, config, CutCost::new(graph, la)),
    }
}

fn anneal<C: SwapCost>(
    graph: &Graph,
    start: &LinearArrangement,
    config: &OrderingConfig,
    mut cost: C,
) -> Result<LinearArrangement> {
    let n = graph.n_nodes();
    let schedule = config.annealing;
    let mean_length = graph
        .edges()
        .iter()
        .map(|&(u, v)| start.slot(u as usize).abs_diff(start.slot(v as usize)) as f64)
        .sum::<f64>()
        / graph.n_edges() as f64;
    let t0 = schedule.initial_temperature.unwrap_or(mean_length);
    let t_floor = schedule.final_ratio * t0;
    let per_level = schedule.steps_per_temperature.unwrap_or(100 * n);
    let budget = config.swap_iterations.unwrap_or(usize::MAX);

    let mut rng = config.seed.rng();
    let mut current = start.clone();
    let mut best = start.clone();
    let mut best_cost = cost.cost();
    let mut best_cut = max_cut(graph, &best);
    // True while `current` is a best-cost state not yet compared with `best`.
    let mut at_unsaved_best = false;

    let consider = |current: &LinearArrangement, best: &mut LinearArrangement, best_cut: &mut u32, strictly_better: bool| {
        let cut = max_cut(graph, current);
        if strictly_better || cut < *best_cut {
            *best = current.clone();
            *best_cut = cut;
        }
    };

    let mut t = t0;
    let mut steps = 0usize;
    let mut improved_since_save = false;
    'outer: while t >= t_floor {
        for _ in 0..per_level {
            if steps >= budget {
                break 'outer;
            }
            steps += 1;
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            let delta = cost.delta(&current, u, v);
            let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp();
            if !accept {
                continue;
            }
            if delta > 0.0 && at_unsaved_best {
                consider(&current, &mut best, &mut best_cut, improved_since_save);
                improved_since_save = false;
                at_unsaved_best = false;
            }
            current.swap_nodes(u, v);
            cost.commit(&current, u, v, delta);
            let c = cost.cost();
            if c < best_cost {
                best_cost = c;
                improved_since_save = true;
                at_unsaved_best = true;
            } else if c == best_cost {
                at_unsaved_best = true;
            }
        }
        t *= schedule.cooling;
    }
    if at_unsaved_best {
        consider(&current, &mut best, &mut best_cut, improved_since_save);
    }
    Ok(best)
}
