//! Event-driven (Gillespie) simulation with incremental rate bookkeeping.

use rand::Rng as _;
use rand_distr::{Distribution, Exp1};

use super::fenwick::Fenwick;
use super::{allocate_resources, count_contagious_edges, DiffusionParams, EpidemicState, Strategy};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngSeed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Infection,
    Recovery,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Infection => "infection",
            EventKind::Recovery => "recovery",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEvent {
    pub time: f64,
    pub node: u32,
    pub kind: EventKind,
}

#[derive(Debug, Clone)]
pub enum InitialCondition {
    AllInfected,
    State(EpidemicState),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Simulated time after which a surviving run is censored.
    pub horizon: f64,
    /// Spacing of the sampled infected-count curve; `None` disables it.
    pub sample_dt: Option<f64>,
    pub record_events: bool,
    /// Recount all rates and the resource placement every this many events.
    pub audit_every: Option<u64>,
}

impl SimConfig {
    /// Horizon `50·N/δ`, no sampling, no event log.
    pub fn for_graph(graph: &Graph, params: &DiffusionParams) -> Self {
        SimConfig {
            horizon: 50.0 * graph.n_nodes().max(1) as f64 / params.delta(),
            sample_dt: None,
            record_events: false,
            audit_every: None,
        }
    }

    pub fn with_horizon(horizon: f64) -> Self {
        SimConfig {
            horizon,
            sample_dt: None,
            record_events: false,
            audit_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Empty unless `record_events` was set.
    pub events: Vec<SimEvent>,
    pub n_events: u64,
    /// Time the last infected node recovered; `None` if censored.
    pub extinction_time: Option<f64>,
    pub horizon: f64,
    pub initial_infected: usize,
    pub peak_infected: usize,
    pub final_infected: usize,
    /// `(k·dt, infected count at k·dt)`; continues to the first grid point
    /// at or after extinction.
    pub samples: Vec<(f64, u32)>,
}

impl Trajectory {
    pub fn is_extinct(&self) -> bool {
        self.extinction_time.is_some()
    }

    /// Extinction time, or the horizon for censored runs.
    pub fn tau_or_horizon(&self) -> f64 {
        self.extinction_time.unwrap_or(self.horizon)
    }
}

struct Engine<'a> {
    graph: &'a Graph,
    params: &'a DiffusionParams,
    /// Slot of each node in the priority order; absent without a plan.
    slots: Option<&'a [u32]>,
    order: Option<&'a [u32]>,
    infected: Vec<bool>,
    pressure: Vec<u32>,
    /// Infection weight of each susceptible node (its pressure); 0 if infected.
    susceptible_weight: Fenwick,
    /// Indicator of infected nodes indexed by priority slot.
    infected_slots: Fenwick,
    infected_list: Vec<u32>,
    list_index: Vec<u32>,
    budget: usize,
}

impl<'a> Engine<'a> {
    fn new(graph: &'a Graph, params: &'a DiffusionParams, strategy: &'a Strategy, infected: &[bool]) -> Self {
        let n = graph.n_nodes();
        let (slots, order) = match strategy {
            Strategy::PriorityPlanning(la) => (Some(la.slots()), Some(la.order())),
            Strategy::None => (None, None),
        };
        let mut e = Engine {
            graph,
            params,
            slots,
            order,
            infected: vec![false; n],
            pressure: vec![0; n],
            susceptible_weight: Fenwick::new(n),
            infected_slots: Fenwick::new(n),
            infected_list: Vec::with_capacity(n),
            list_index: vec![u32::MAX; n],
            budget: params.budget().at(0.0),
        };
        for v in (0..n).filter(|&v| infected[v]) {
            e.infect(v);
        }
        e
    }

    fn infected_count(&self) -> usize {
        self.infected_list.len()
    }

    fn contagious_edges(&self) -> i64 {
        self.susceptible_weight.total()
    }

    fn treated_count(&self) -> usize {
        if self.slots.is_some() {
            self.budget.min(self.infected_count())
        } else {
            0
        }
    }

    fn rates(&self) -> (f64, f64, f64) {
        let p = self.params;
        (
            p.beta() * self.contagious_edges() as f64,
            p.delta() * self.infected_count() as f64,
            p.rho() * self.treated_count() as f64,
        )
    }

    fn infect(&mut self, v: usize) {
        debug_assert!(!self.infected[v]);
        self.infected[v] = true;
        self.susceptible_weight.add(v, -(self.pressure[v] as i64));
        for &w in self.graph.neighbors(v) {
            let w = w as usize;
            self.pressure[w] += 1;
            if !self.infected[w] {
                self.susceptible_weight.add(w, 1);
            }
        }
        if let Some(slots) = self.slots {
            self.infected_slots.add(slots[v] as usize, 1);
        }
        self.list_index[v] = self.infected_list.len() as u32;
        self.infected_list.push(v as u32);
    }

    fn recover(&mut self, v: usize) {
        debug_assert!(self.infected[v]);
        self.infected[v] = false;
        self.susceptible_weight.add(v, self.pressure[v] as i64);
        for &w in self.graph.neighbors(v) {
            let w = w as usize;
            self.pressure[w] -= 1;
            if !self.infected[w] {
                self.susceptible_weight.add(w, -1);
            }
        }
        if let Some(slots) = self.slots {
            self.infected_slots.add(slots[v] as usize, -1);
        }
        let i = self.list_index[v] as usize;
        let last = *self.infected_list.last().unwrap();
        self.infected_list.swap_remove(i);
        if last as usize != v {
            self.list_index[last as usize] = i as u32;
        }
        self.list_index[v] = u32::MAX;
    }

    /// Node holding the `k`-th resource (0-based) in priority order.
    fn treated_node(&self, k: usize) -> usize {
        let slot = self.infected_slots.find(k as i64);
        self.order.expect("priority plan")[slot] as usize
    }

    fn audit(&self, event: u64) -> Result<()> {
        let p = self.params;
        let n_i = self.infected.iter().filter(|&&x| x).count();
        let e = count_contagious_edges(self.graph, &self.infected);
        let treated = match self.order {
            Some(order) => {
                let la = crate::arrangement::LinearArrangement::from_order(
                    order.iter().map(|&v| v as usize).collect(),
                )?;
                let expect = allocate_resources(&self.infected, &la, self.budget);
                let got: Vec<bool> = {
                    let mut r = vec![false; self.infected.len()];
                    for k in 0..self.treated_count() {
                        r[self.treated_node(k)] = true;
                    }
                    r
                };
                if expect != got {
                    return Err(Error::InconsistentState(format!(
                        "resource placement diverged from priority allocation at event {event}"
                    )));
                }
                expect.iter().filter(|&&x| x).count()
            }
            None => 0,
        };
        let recount = p.beta() * e as f64 + p.delta() * n_i as f64 + p.rho() * treated as f64;
        let (a, b, c) = self.rates();
        let cached = a + b + c;
        if (cached - recount).abs() > 1e-9 * recount.max(1.0) {
            return Err(Error::RateMismatch {
                cached,
                recount,
                event,
            });
        }
        for v in 0..self.infected.len() {
            let want = self.graph.neighbors(v).iter().filter(|&&w| self.infected[w as usize]).count();
            if self.pressure[v] as usize != want {
                return Err(Error::InconsistentState(format!("pressure cache of node {v} is stale")));
            }
        }
        Ok(())
    }
}

/// Runs one exact realization until extinction or `config.horizon`.
pub fn simulate(
    graph: &Graph,
    params: &DiffusionParams,
    strategy: &Strategy,
    initial: &InitialCondition,
    seed: RngSeed,
    config: &SimConfig,
) -> Result<Trajectory> {
    if !(config.horizon > 0.0) {
        return Err(Error::param("horizon", "must be positive"));
    }
    if config.sample_dt.is_some_and(|dt| !(dt > 0.0)) {
        return Err(Error::param("sample_dt", "must be positive"));
    }
    strategy.check_graph(graph)?;
    let n = graph.n_nodes();
    let infected: Vec<bool> = match initial {
        InitialCondition::AllInfected => vec![true; n],
        InitialCondition::State(s) => {
            if s.infected().len() != n {
                return Err(Error::InconsistentState(format!(
                    "state for {} nodes on a graph of {n}",
                    s.infected().len()
                )));
            }
            if let Some(v) = (0..n).find(|&v| s.resources()[v] && !s.infected()[v]) {
                return Err(Error::InconsistentState(format!("resource on healthy node {v}")));
            }
            s.infected().to_vec()
        }
    };

    let mut engine = Engine::new(graph, params, strategy, &infected);
    let mut rng = seed.rng();
    let mut traj = Trajectory {
        events: Vec::new(),
        n_events: 0,
        extinction_time: None,
        horizon: config.horizon,
        initial_infected: engine.infected_count(),
        peak_infected: engine.infected_count(),
        final_infected: 0,
        samples: Vec::new(),
    };
    let mut next_sample = 0u64;
    let mut emit_until = |traj: &mut Trajectory, t: f64, inclusive: bool, count: usize| {
        if let Some(dt) = config.sample_dt {
            loop {
                let ts = next_sample as f64 * dt;
                if ts > config.horizon || ts > t || (!inclusive && ts == t) {
                    break;
                }
                traj.samples.push((ts, count as u32));
                next_sample += 1;
            }
        }
    };

    let mut t = 0.0;
    if config.audit_every.is_some_and(|k| k > 0) {
        engine.audit(0)?;
    }
    while engine.infected_count() > 0 {
        let (inf, rec, treat) = engine.rates();
        let total = inf + rec + treat;
        let wait: f64 = Exp1.sample(&mut rng);
        let t_next = t + wait / total;
        if let Some(tc) = params.budget().next_change(t).filter(|&tc| tc < t_next && tc <= config.horizon) {
            // Rates change at a budget step; restart the clock there.
            emit_until(&mut traj, tc, false, engine.infected_count());
            t = tc;
            engine.budget = params.budget().at(tc);
            continue;
        }
        if t_next > config.horizon {
            emit_until(&mut traj, config.horizon, true, engine.infected_count());
            t = config.horizon;
            break;
        }
        emit_until(&mut traj, t_next, false, engine.infected_count());
        t = t_next;
        let u = rng.random::<f64>() * total;
        let (node, kind) = if u < inf {
            let target = rng.random_range(0..engine.contagious_edges());
            (engine.susceptible_weight.find(target), EventKind::Infection)
        } else if u < inf + rec || treat == 0.0 {
            let i = rng.random_range(0..engine.infected_count());
            (engine.infected_list[i] as usize, EventKind::Recovery)
        } else {
            let k = rng.random_range(0..engine.treated_count());
            (engine.treated_node(k), EventKind::Recovery)
        };
        match kind {
            EventKind::Infection => engine.infect(node),
            EventKind::Recovery => engine.recover(node),
        }
        traj.n_events += 1;
        traj.peak_infected = traj.peak_infected.max(engine.infected_count());
        if config.record_events {
            traj.events.push(SimEvent {
                time: t,
                node: node as u32,
                kind,
            });
        }
        if let Some(k) = config.audit_every.filter(|&k| k > 0) {
            if traj.n_events.is_multiple_of(k) {
                engine.audit(traj.n_events)?;
            }
        }
    }
    traj.final_infected = engine.infected_count();
    if traj.final_infected == 0 {
        traj.extinction_time = Some(t);
        // One zero sample at the first grid point at or after extinction.
        if let Some(dt) = config.sample_dt {
            let ts = next_sample as f64 * dt;
            if ts <= config.horizon {
                traj.samples.push((ts, 0));
            }
        }
    }
    Ok(traj)
}
