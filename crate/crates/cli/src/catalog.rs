//! Network generators and ordering strategies addressable by name.

use std::fmt;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use cutplan::arrangement::{
    default_recompute_every, order_exact_min_cutwidth, order_least_neighbors, order_lrsr, order_mcm,
    order_most_neighbors, order_random, LinearArrangement, Objective, OrderingConfig,
};
use cutplan::graph::{
    gen_erdos_renyi, gen_geometric, gen_grid, gen_preferential_attachment, gen_small_world, load_edge_list,
};
use cutplan::{Graph, RngSeed};

/// A required flag or key that the chosen model needs but was not given.
#[derive(Debug)]
pub struct MissingParam(pub String);

impl fmt::Display for MissingParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for MissingParam {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Model {
    Er,
    Ba,
    Ws,
    Geo,
    Grid,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Ba => "ba",
            Model::Ws => "ws",
            Model::Geo => "geo",
            Model::Grid => "grid",
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        Model::from_str(s, true).ok()
    }
}

/// Generator parameters; which ones are needed depends on the model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParams {
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub beta: Option<f64>,
    pub radius: Option<f64>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

impl ModelParams {
    /// Parameters `model` needs that are not set.
    pub fn missing(&self, model: Model) -> Vec<&'static str> {
        let need = |set: bool, name: &'static str| (!set).then_some(name);
        let checks = match model {
            Model::Er => vec![need(self.n.is_some(), "n"), need(self.p.is_some(), "p")],
            Model::Ba => vec![need(self.n.is_some(), "n"), need(self.m.is_some(), "m")],
            Model::Ws => vec![
                need(self.n.is_some(), "n"),
                need(self.k.is_some(), "k"),
                need(self.beta.is_some(), "beta"),
            ],
            Model::Geo => vec![need(self.n.is_some(), "n"), need(self.radius.is_some(), "radius")],
            Model::Grid => vec![need(self.rows.is_some(), "rows"), need(self.cols.is_some(), "cols")],
        };
        checks.into_iter().flatten().collect()
    }

    pub fn check(&self, model: Model) -> Result<()> {
        let missing = self.missing(model);
        if missing.is_empty() {
            return Ok(());
        }
        let flags: Vec<String> = missing.iter().map(|m| format!("--{m}")).collect();
        let verb = if flags.len() == 1 { "is" } else { "are" };
        Err(MissingParam(format!("{} {verb} required for model {}", flags.join(", "), model.name())).into())
    }

    pub fn generate(&self, model: Model, seed: RngSeed) -> Result<Graph> {
        self.check(model)?;
        let g = match model {
            Model::Er => gen_erdos_renyi(self.n.unwrap(), self.p.unwrap(), seed)?,
            Model::Ba => gen_preferential_attachment(self.n.unwrap(), self.m.unwrap(), seed)?,
            Model::Ws => gen_small_world(self.n.unwrap(), self.k.unwrap(), self.beta.unwrap(), seed)?,
            Model::Geo => gen_geometric(self.n.unwrap(), self.radius.unwrap(), seed)?,
            Model::Grid => gen_grid(self.rows.unwrap(), self.cols.unwrap())?,
        };
        Ok(g)
    }

    /// `key=value` pairs of the parameters used by `model`, for file headers.
    pub fn describe(&self, model: Model) -> String {
        let mut parts = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        };
        match model {
            Model::Grid => {
                push("rows", self.rows.map(|x| x.to_string()));
                push("cols", self.cols.map(|x| x.to_string()));
            }
            _ => {
                push("n", self.n.map(|x| x.to_string()));
                match model {
                    Model::Er => push("p", self.p.map(|x| x.to_string())),
                    Model::Ba => push("m", self.m.map(|x| x.to_string())),
                    Model::Ws => {
                        push("k", self.k.map(|x| x.to_string()));
                        push("beta", self.beta.map(|x| x.to_string()));
                    }
                    Model::Geo => push("radius", self.radius.map(|x| x.to_string())),
                    Model::Grid => unreachable!(),
                }
            }
        }
        parts.join(" ")
    }
}

/// Where a network comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Generated(Model),
    File(PathBuf),
}

impl NetworkSource {
    pub fn label(&self) -> String {
        match self {
            NetworkSource::Generated(m) => m.name().to_string(),
            NetworkSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into()),
        }
    }

    pub fn build(&self, params: &ModelParams, seed: RngSeed) -> Result<Graph> {
        match self {
            NetworkSource::Generated(m) => params.generate(*m, seed),
            NetworkSource::File(p) => Ok(load_edge_list(p)?.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum StrategyKind {
    Rand,
    Mn,
    Ln,
    Lrsr,
    Mcm,
    Exact,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Rand => "rand",
            StrategyKind::Mn => "mn",
            StrategyKind::Ln => "ln",
            StrategyKind::Lrsr => "lrsr",
            StrategyKind::Mcm => "mcm",
            StrategyKind::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<StrategyKind> {
        StrategyKind::from_str(s, true).ok()
    }
}

/// Knobs shared by the ordering heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderOptions {
    pub clusters: Option<usize>,
    pub swap_iterations: Option<usize>,
    /// Exponent of the annealing surrogate; 0 anneals the max cutwidth itself.
    pub p: u32,
    pub lrsr_every: Option<usize>,
}

impl Default for OrderOptions {
    fn default() -> Self {
        OrderOptions {
            clusters: None,
            swap_iterations: None,
            p: 1,
            lrsr_every: None,
        }
    }
}

pub fn build_order(graph: &Graph, kind: StrategyKind, seed: RngSeed, opts: &OrderOptions) -> Result<LinearArrangement> {
    let n = graph.n_nodes();
    if n == 0 {
        bail!("graph has no nodes");
    }
    Ok(match kind {
        StrategyKind::Rand => order_random(graph, seed),
        StrategyKind::Mn => order_most_neighbors(graph),
        StrategyKind::Ln => order_least_neighbors(graph),
        StrategyKind::Lrsr => order_lrsr(graph, opts.lrsr_every.unwrap_or_else(|| default_recompute_every(n)))?,
        StrategyKind::Mcm => {
            let cfg = OrderingConfig {
                n_clusters: opts.clusters,
                swap_iterations: opts.swap_iterations,
                objective: if opts.p == 0 {
                    Objective::MaxCutwidth
                } else {
                    Objective::PSum { p: opts.p }
                },
                seed,
                ..OrderingConfig::default()
            };
            order_mcm(graph, &cfg)?.arrangement
        }
        StrategyKind::Exact => order_exact_min_cutwidth(graph)?.0,
    })
}
