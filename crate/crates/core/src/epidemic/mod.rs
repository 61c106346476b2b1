//! Exact continuous-time SIS dynamics under budgeted priority treatment.
//!
//! A susceptible node is infected at rate `β · (#infected neighbors)`; an
//! infected node recovers at rate `δ + ρ · R_i`, where `R_i ∈ {0, 1}` marks
//! the nodes holding one of the `b(t)` resources. Under priority planning
//! the resources go to the infected nodes that come first in a fixed linear
//! arrangement, and are reassigned after every state change.

mod ensemble;
mod fenwick;
mod sim;

pub use ensemble::{run_ensemble, run_probe, EnsembleSummary, ProbeOutcome, RunRecord};
pub use sim::{simulate, EventKind, InitialCondition, SimConfig, SimEvent, Trajectory};

use crate::arrangement::LinearArrangement;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of resources available over time.
#[derive(Debug, Clone, PartialEq)]
pub enum BudgetSchedule {
    Constant(usize),
    /// `(start_time, budget)` steps sorted by start time; the first step
    /// must start at 0.
    Piecewise(Vec<(f64, usize)>),
}

impl BudgetSchedule {
    pub fn at(&self, t: f64) -> usize {
        match self {
            BudgetSchedule::Constant(b) => *b,
            BudgetSchedule::Piecewise(steps) => {
                let i = steps.partition_point(|&(s, _)| s <= t);
                steps[i.saturating_sub(1)].1
            }
        }
    }

    /// First change point strictly after `t`.
    pub fn next_change(&self, t: f64) -> Option<f64> {
        match self {
            BudgetSchedule::Constant(_) => None,
            BudgetSchedule::Piecewise(steps) => steps.iter().map(|&(s, _)| s).find(|&s| s > t),
        }
    }

    fn validate(&self) -> Result<()> {
        if let BudgetSchedule::Piecewise(steps) = self {
            if steps.first().is_none_or(|&(s, _)| s != 0.0) {
                return Err(Error::param("budget", "schedule must start at time 0"));
            }
            if steps.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                return Err(Error::param("budget", "change points must increase"));
            }
        }
        Ok(())
    }
}

/// Rates of the controlled SIS process.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionParams {
    beta: f64,
    delta: f64,
    rho: f64,
    budget: BudgetSchedule,
}

impl DiffusionParams {
    pub fn new(beta: f64, delta: f64, rho: f64, budget: BudgetSchedule) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::param("beta", format!("{beta} must be finite and >= 0")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::param("delta", format!("{delta} must be finite and > 0")));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::param("rho", format!("{rho} must be finite and >= 0")));
        }
        budget.validate()?;
        Ok(DiffusionParams {
            beta,
            delta,
            rho,
            budget,
        })
    }

    /// Dimensionless parameterization with `δ = 1`: `β = r`, `ρ = e`.
    pub fn normalized(r: f64, e: f64, b_tot: usize) -> Result<Self> {
        Self::new(r, 1.0, e, BudgetSchedule::Constant(b_tot))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn budget(&self) -> &BudgetSchedule {
        &self.budget
    }

    /// Effective spreading rate `β/δ`.
    pub fn r(&self) -> f64 {
        self.beta / self.delta
    }

    /// Resource efficiency `ρ/δ`.
    pub fn e(&self) -> f64 {
        self.rho / self.delta
    }
}

/// Who receives resources.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// No treatment at all.
    None,
    /// Treat the first `b(t)` infected nodes of the arrangement.
    PriorityPlanning(LinearArrangement),
}

impl Strategy {
    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        match self {
            Strategy::None => Ok(()),
            Strategy::PriorityPlanning(la) => la.check_graph(graph),
        }
    }
}

/// Snapshot of the infection and treatment vectors with derived counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpidemicState {
    infected: Vec<bool>,
    resources: Vec<bool>,
    infected_count: usize,
    contagious_edge_count: usize,
    /// Infected-neighbor count of every node.
    pressure: Vec<u32>,
}

impl EpidemicState {
    /// State with the given infection vector and no resources.
    pub fn from_infected(graph: &Graph, infected: Vec<bool>) -> Result<Self> {
        let resources = vec![false; infected.len()];
        Self::with_resources(graph, infected, resources)
    }

    pub fn with_resources(graph: &Graph, infected: Vec<bool>, resources: Vec<bool>) -> Result<Self> {
        let n = graph.n_nodes();
        if infected.len() != n || resources.len() != n {
            return Err(Error::InconsistentState(format!(
                "vectors of length {}/{} for {n} nodes",
                infected.len(),
                resources.len()
            )));
        }
        if let Some(v) = (0..n).find(|&v| resources[v] && !infected[v]) {
            return Err(Error::InconsistentState(format!("resource on healthy node {v}")));
        }
        let pressure = (0..n)
            .map(|v| graph.neighbors(v).iter().filter(|&&w| infected[w as usize]).count() as u32)
            .collect();
        Ok(EpidemicState {
            infected_count: infected.iter().filter(|&&x| x).count(),
            contagious_edge_count: count_contagious_edges(graph, &infected),
            infected,
            resources,
            pressure,
        })
    }

    /// Infected set given by node ids.
    pub fn from_nodes(graph: &Graph, nodes: &[usize]) -> Result<Self> {
        let mut infected = vec![false; graph.n_nodes()];
        for &v in nodes {
            if v >= infected.len() {
                return Err(Error::InconsistentState(format!("node {v} out of range")));
            }
            infected[v] = true;
        }
        Self::from_infected(graph, infected)
    }

    pub fn all_infected(graph: &Graph) -> Self {
        Self::from_infected(graph, vec![true; graph.n_nodes()]).expect("consistent")
    }

    pub fn infected(&self) -> &[bool] {
        &self.infected
    }

    pub fn resources(&self) -> &[bool] {
        &self.resources
    }

    pub fn infected_count(&self) -> usize {
        self.infected_count
    }

    pub fn contagious_edge_count(&self) -> usize {
        self.contagious_edge_count
    }

    pub fn pressure(&self) -> &[u32] {
        &self.pressure
    }
}

/// Treats the `min(b, #infected)` infected nodes with the smallest positions
/// in `order`.
pub fn allocate_resources(infected: &[bool], order: &LinearArrangement, b: usize) -> Vec<bool> {
    let mut r = vec![false; infected.len()];
    let mut left = b;
    for &v in order.order() {
        if left == 0 {
            break;
        }
        if infected[v as usize] {
            r[v as usize] = true;
            left -= 1;
        }
    }
    r
}

/// Edges joining an infected and a healthy node, each counted once.
pub fn count_contagious_edges(graph: &Graph, infected: &[bool]) -> usize {
    graph
        .edges()
        .iter()
        .filter(|&&(u, v)| infected[u as usize] != infected[v as usize])
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn allocation_follows_priority() {
        let id = LinearArrangement::identity(4);
        assert_eq!(
            allocate_resources(&[true, false, true, true], &id, 2),
            vec![true, false, true, false]
        );
        assert_eq!(allocate_resources(&[false; 4], &id, 3), vec![false; 4]);
        let rev = LinearArrangement::from_positions(&[3, 2, 1]).unwrap();
        assert_eq!(allocate_resources(&[true; 3], &rev, 1), vec![false, false, true]);
        // Fewer infected than resources: everyone infected is treated.
        assert_eq!(
            allocate_resources(&[false, true, false, true], &id, 10),
            vec![false, true, false, true]
        );
    }

    #[test]
    fn contagious_edges() {
        let k4 = fixtures::complete(4);
        assert_eq!(count_contagious_edges(&k4, &[true; 4]), 0);
        assert_eq!(count_contagious_edges(&k4, &[true, false, false, false]), 3);
        // Nodes at positions 3..5 of (1,3,4,2,5) are v2, v3, v5 (ids 1, 2, 4).
        let g = fixtures::figure_path();
        assert_eq!(count_contagious_edges(&g, &[false, true, true, false, true]), 1);
    }

    #[test]
    fn params_validation() {
        assert!(DiffusionParams::new(-1.0, 1.0, 0.0, BudgetSchedule::Constant(1)).is_err());
        assert!(DiffusionParams::new(1.0, 0.0, 0.0, BudgetSchedule::Constant(1)).is_err());
        assert!(DiffusionParams::new(1.0, 1.0, -2.0, BudgetSchedule::Constant(1)).is_err());
        assert!(DiffusionParams::new(1.0, 1.0, 0.0, BudgetSchedule::Piecewise(vec![(1.0, 2)])).is_err());
        let p = DiffusionParams::new(2.0, 4.0, 10.0, BudgetSchedule::Constant(1)).unwrap();
        assert_eq!((p.r(), p.e()), (0.5, 2.5));
    }

    #[test]
    fn budget_schedule_lookup() {
        let s = BudgetSchedule::Piecewise(vec![(0.0, 1), (2.0, 5), (3.5, 0)]);
        assert_eq!(s.at(0.0), 1);
        assert_eq!(s.at(1.99), 1);
        assert_eq!(s.at(2.0), 5);
        assert_eq!(s.at(10.0), 0);
        assert_eq!(s.next_change(2.0), Some(3.5));
        assert_eq!(s.next_change(3.5), None);
    }

    #[test]
    fn state_consistency() {
        let g = fixtures::path(3);
        assert!(EpidemicState::with_resources(&g, vec![true, false, false], vec![false, true, false]).is_err());
        let s = EpidemicState::from_nodes(&g, &[1]).unwrap();
        assert_eq!(s.contagious_edge_count(), 2);
        assert_eq!(s.pressure(), &[1, 0, 1]);
        assert!(EpidemicState::from_nodes(&g, &[3]).is_err());
    }
}
