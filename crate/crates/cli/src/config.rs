//! Experiment configuration: flat `section.key=value` lines, `#` comments.
//!
//! ```text
//! experiment.kind=threshold_vs_cutwidth
//! experiment.seed=7
//! experiment.out_dir=results
//! network.models=er,ba,ws,geo,grid
//! network.instances=2
//! network.n=100
//! network.p=0.05
//! strategy.list=mcm,rand,lrsr
//! diffusion.r=0.1,10
//! probe.runs=100
//! ```
//!
//! Relative paths are resolved against the directory holding the config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::catalog::{Model, ModelParams, NetworkSource, OrderOptions, StrategyKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    ThresholdVsCutwidth,
    StrategyComparison,
    BoundCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ThresholdVsCutwidth => "threshold_vs_cutwidth",
            ExperimentKind::StrategyComparison => "strategy_comparison",
            ExperimentKind::BoundCheck => "bound_check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub runs: usize,
    pub horizon_multiplier: f64,
    pub success_fraction: f64,
    pub cap_factor: f64,
    /// Absolute bracket width; overrides `rel_tol`.
    pub tol: Option<f64>,
    /// Bracket width relative to `r C_max / b_tot`.
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub networks: Vec<NetworkSource>,
    pub instances: usize,
    pub model_params: ModelParams,
    pub strategies: Vec<StrategyKind>,
    pub order_options: OrderOptions,
    pub r: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta: f64,
    pub rho: Vec<f64>,
    pub budget: usize,
    pub probe: ProbeConfig,
    pub sim_runs: usize,
    pub horizon: Option<f64>,
    pub sample_dt: Option<f64>,
}

const KEYS: &[&str] = &[
    "experiment.kind",
    "experiment.seed",
    "experiment.out_dir",
    "network.models",
    "network.path",
    "network.instances",
    "network.n",
    "network.p",
    "network.m",
    "network.k",
    "network.beta",
    "network.radius",
    "network.rows",
    "network.cols",
    "strategy.list",
    "strategy.clusters",
    "strategy.swap_iterations",
    "strategy.p",
    "strategy.lrsr_every",
    "diffusion.r",
    "diffusion.beta",
    "diffusion.delta",
    "diffusion.rho",
    "diffusion.budget",
    "probe.runs",
    "probe.horizon_multiplier",
    "probe.success_fraction",
    "probe.cap_factor",
    "probe.tol",
    "probe.rel_tol",
    "simulation.runs",
    "simulation.horizon",
    "simulation.sample_dt",
];

/// Every problem found in a config, reported together.
#[derive(Debug)]
pub struct ConfigErrors {
    pub origin: PathBuf,
    pub errors: Vec<String>,
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config {}: {}", self.origin.display(), self.errors.join("; "))
    }
}

impl std::error::Error for ConfigErrors {}

struct Fields<'a> {
    map: BTreeMap<String, (usize, String)>,
    errors: &'a mut Vec<String>,
}

impl Fields<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn get<T: FromStr>(&mut self, key: &str, what: &str) -> Option<T> {
        let v = self.raw(key)?.to_string();
        match v.parse() {
            Ok(x) => Some(x),
            Err(_) => {
                self.errors.push(format!("{key}: expected {what}, got `{v}`"));
                None
            }
        }
    }

    fn list<T: FromStr>(&mut self, key: &str, what: &str) -> Option<Vec<T>> {
        let v = self.raw(key)?.to_string();
        let mut out = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse() {
                Ok(x) => out.push(x),
                Err(_) => {
                    self.errors.push(format!("{key}: expected a list of {what}, got `{item}`"));
                    return None;
                }
            }
        }
        if out.is_empty() {
            self.errors.push(format!("{key}: empty list"));
            return None;
        }
        Some(out)
    }

    fn error(&mut self, msg: String) {
        self.errors.push(msg);
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok(parse(&text, path, &base)?)
}

pub fn parse(text: &str, origin: &Path, base: &Path) -> std::result::Result<ExperimentConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            errors.push(format!("line {}: expected key=value, got `{line}`", i + 1));
            continue;
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if !KEYS.contains(&k.as_str()) {
            errors.push(format!("line {}: unknown key `{k}`", i + 1));
            continue;
        }
        if let Some((prev, _)) = map.insert(k.clone(), (i + 1, v)) {
            errors.push(format!("line {}: `{k}` already set on line {prev}", i + 1));
        }
    }
    let mut f = Fields {
        map,
        errors: &mut errors,
    };

    let kind = match f.raw("experiment.kind") {
        Some("threshold_vs_cutwidth") => Some(ExperimentKind::ThresholdVsCutwidth),
        Some("strategy_comparison") => Some(ExperimentKind::StrategyComparison),
        Some("bound_check") => Some(ExperimentKind::BoundCheck),
        Some(other) => {
            let msg = format!(
                "experiment.kind: expected threshold_vs_cutwidth, strategy_comparison or bound_check, got `{other}`"
            );
            f.error(msg);
            None
        }
        None => {
            f.error("experiment.kind: required".into());
            None
        }
    };
    let seed = f.get("experiment.seed", "an unsigned integer").unwrap_or(0);
    let out_dir = f.raw("experiment.out_dir").map(|p| resolve(base, p)).unwrap_or_default();

    let model_params = ModelParams {
        n: f.get("network.n", "a node count"),
        p: f.get("network.p", "a probability"),
        m: f.get("network.m", "an integer"),
        k: f.get("network.k", "an integer"),
        beta: f.get("network.beta", "a probability"),
        radius: f.get("network.radius", "a real"),
        rows: f.get("network.rows", "an integer"),
        cols: f.get("network.cols", "an integer"),
    };
    let mut networks = Vec::new();
    match (f.raw("network.models").map(str::to_string), f.raw("network.path").map(str::to_string)) {
        (Some(_), Some(_)) => f.error("network.models and network.path are mutually exclusive".into()),
        (None, None) => f.error("network.models or network.path: one is required".into()),
        (Some(list), None) => {
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match Model::parse(name) {
                    Some(m) => {
                        for key in model_params.missing(m) {
                            let key = format!("network.{key}");
                            // A malformed value was already reported.
                            if f.raw(&key).is_none() {
                                f.error(format!("{key}: required for model {}", m.name()));
                            }
                        }
                        networks.push(NetworkSource::Generated(m));
                    }
                    None => f.error(format!("network.models: unknown model `{name}`")),
                }
            }
            if networks.is_empty() {
                f.error("network.models: empty list".into());
            }
        }
        (None, Some(p)) => {
            let full = resolve(base, &p);
            if !full.is_file() {
                f.error(format!("network.path: file {} not found", full.display()));
            }
            networks.push(NetworkSource::File(full));
        }
    }
    let instances = f.get("network.instances", "a positive integer").unwrap_or(1);
    if instances == 0 {
        f.error("network.instances: must be at least 1".into());
    }

    let mut strategies = Vec::new();
    match f.raw("strategy.list").map(str::to_string) {
        None => f.error("strategy.list: required".into()),
        Some(list) => {
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match StrategyKind::parse(name) {
                    Some(s) if !strategies.contains(&s) => strategies.push(s),
                    Some(_) => f.error(format!("strategy.list: `{name}` listed twice")),
                    None => f.error(format!("strategy.list: unknown strategy `{name}`")),
                }
            }
        }
    }
    let order_options = OrderOptions {
        clusters: f.get("strategy.clusters", "a positive integer"),
        swap_iterations: f.get("strategy.swap_iterations", "an integer"),
        p: f.get("strategy.p", "an integer").unwrap_or(1),
        lrsr_every: f.get("strategy.lrsr_every", "a positive integer"),
    };

    let r = f.list("diffusion.r", "positive reals").unwrap_or_default();
    let beta = f.list("diffusion.beta", "nonnegative reals").unwrap_or_default();
    let rho = f.list("diffusion.rho", "nonnegative reals").unwrap_or_default();
    let delta: f64 = f.get("diffusion.delta", "a positive real").unwrap_or(1.0);
    let budget = f.get("diffusion.budget", "a positive integer").unwrap_or(1);
    if r.iter().any(|&x: &f64| !(x > 0.0 && x.is_finite())) {
        f.error("diffusion.r: values must be positive".into());
    }
    if beta.iter().chain(&rho).any(|&x: &f64| !(x >= 0.0 && x.is_finite())) {
        f.error("diffusion.beta/diffusion.rho: values must be nonnegative".into());
    }
    if !(delta > 0.0 && delta.is_finite()) {
        f.error("diffusion.delta: must be positive".into());
    }

    let probe = ProbeConfig {
        runs: f.get("probe.runs", "a positive integer").unwrap_or(100),
        horizon_multiplier: f.get("probe.horizon_multiplier", "a positive real").unwrap_or(10.0),
        success_fraction: f.get("probe.success_fraction", "a fraction").unwrap_or(0.8),
        cap_factor: f.get("probe.cap_factor", "a real >= 1").unwrap_or(10.0),
        tol: f.get("probe.tol", "a positive real"),
        rel_tol: f.get("probe.rel_tol", "a positive real").unwrap_or(0.05),
    };
    if probe.runs == 0 {
        f.error("probe.runs: must be at least 1".into());
    }
    if !(probe.success_fraction > 0.0 && probe.success_fraction <= 1.0) {
        f.error("probe.success_fraction: must lie in (0, 1]".into());
    }
    if probe.tol.is_some_and(|t| !(t > 0.0)) || !(probe.rel_tol > 0.0) {
        f.error("probe.tol/probe.rel_tol: must be positive".into());
    }
    let sim_runs = f.get("simulation.runs", "a positive integer").unwrap_or(100);
    if sim_runs == 0 {
        f.error("simulation.runs: must be at least 1".into());
    }
    let horizon: Option<f64> = f.get("simulation.horizon", "a positive real");
    if horizon.is_some_and(|h| !(h > 0.0)) {
        f.error("simulation.horizon: must be positive".into());
    }
    let sample_dt: Option<f64> = f.get("simulation.sample_dt", "a positive real");
    if sample_dt.is_some_and(|h| !(h > 0.0)) {
        f.error("simulation.sample_dt: must be positive".into());
    }

    match kind {
        Some(ExperimentKind::ThresholdVsCutwidth) => {
            if f.raw("diffusion.r").is_none() {
                f.error("diffusion.r: required for threshold_vs_cutwidth".into());
            }
        }
        Some(ExperimentKind::StrategyComparison) | Some(ExperimentKind::BoundCheck) => {
            for key in ["diffusion.beta", "diffusion.rho"] {
                if f.raw(key).is_none() {
                    f.error(format!("{key}: required for {}", kind.unwrap().name()));
                }
            }
            if kind == Some(ExperimentKind::StrategyComparison) && sample_dt.is_none() {
                f.error("simulation.sample_dt: required for strategy_comparison".into());
            }
        }
        None => {}
    }
    if budget == 0 {
        f.error("diffusion.budget: must be at least 1".into());
    }

    if !errors.is_empty() {
        return Err(ConfigErrors {
            origin: origin.to_path_buf(),
            errors,
        });
    }
    Ok(ExperimentConfig {
        kind: kind.unwrap(),
        seed,
        out_dir,
        networks,
        instances,
        model_params,
        strategies,
        order_options,
        r,
        beta,
        delta,
        rho,
        budget,
        probe,
        sim_runs,
        horizon,
        sample_dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(s: &str) -> std::result::Result<ExperimentConfig, ConfigErrors> {
        parse(s, Path::new("exp.cfg"), Path::new("/base"))
    }

    #[test]
    fn full_config() {
        let cfg = parse_str(
            "# Fig-2 style sweep\nexperiment.kind=threshold_vs_cutwidth\nexperiment.seed=7\nexperiment.out_dir=out\n\
             network.models=er, grid\nnetwork.n=50\nnetwork.p=0.1\nnetwork.rows=5\nnetwork.cols=5\n\
             strategy.list=mcm,rand\ndiffusion.r=0.1,10\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, ExperimentKind::ThresholdVsCutwidth);
        assert_eq!(cfg.out_dir, PathBuf::from("/base/out"));
        assert_eq!(cfg.networks, vec![NetworkSource::Generated(Model::Er), NetworkSource::Generated(Model::Grid)]);
        assert_eq!(cfg.strategies, vec![StrategyKind::Mcm, StrategyKind::Rand]);
        assert_eq!(cfg.r, vec![0.1, 10.0]);
        assert_eq!(cfg.probe.runs, 100);
    }

    #[test]
    fn errors_name_fields() {
        let err = parse_str(
            "experiment.kind=threshold_vs_cutwidth\nnetwork.models=er\nnetwork.n=ten\nstrategy.list=mcm,bogus\nfoo.bar=1\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("network.n: expected a node count, got `ten`"), "{err}");
        assert!(err.contains("network.p: required for model er"), "{err}");
        assert!(!err.contains("network.n: required"), "{err}");
        assert!(err.contains("unknown strategy `bogus`"), "{err}");
        assert!(err.contains("line 5: unknown key `foo.bar`"), "{err}");
        assert!(err.contains("diffusion.r: required"), "{err}");
        assert!(!err.contains('\n'));
    }

    #[test]
    fn missing_file_is_reported() {
        let err = parse_str(
            "experiment.kind=bound_check\nnetwork.path=nope.txt\nstrategy.list=mcm\ndiffusion.beta=1\ndiffusion.rho=5\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("network.path: file /base/nope.txt not found"), "{err}");
    }

    #[test]
    fn duplicate_keys_rejected() {
        let err = parse_str("experiment.kind=bound_check\nexperiment.kind=bound_check\n").unwrap_err().to_string();
        assert!(err.contains("already set on line 1"), "{err}");
    }
}
