//! Extinction-time bounds for priority plans and Monte Carlo threshold
//! estimation.

use crate::arrangement::{max_cutwidth, LinearArrangement};
use crate::epidemic::{run_probe, DiffusionParams, InitialCondition, SimConfig, Strategy};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngSeed;

/// Evaluation of the extinction-time bound for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `d_max (1 + ln N) / C_max`; infinite when `C_max = 0`.
    pub epsilon: f64,
    /// `1 + 2√ε + ε`, or 1 when `C_max = 0`.
    pub inflation: f64,
    /// Right-hand side of the rate condition `ρ > β C_max (1 + 2√ε + ε) − δ`.
    pub required_rho: f64,
    pub condition_holds: bool,
    /// Upper bound on the mean extinction time; `None` when the condition fails.
    pub extinction_bound: Option<f64>,
    /// `r C_max (1 + 2√ε + ε) − 1`.
    pub corollary_threshold: f64,
    /// `r C_max / b_tot`. Heuristic for `b_tot > 1`.
    pub naive_threshold: f64,
    /// Set when `C_max = 0`: ε is undefined and the bound degenerates to `N/(ρ+δ)`.
    pub degenerate: bool,
}

/// Expected epidemic threshold `r · C_max / b_tot`.
pub fn expected_threshold(r: f64, c_max: u32, b_tot: usize) -> Result<f64> {
    if b_tot == 0 {
        return Err(Error::param("b_tot", "must be at least 1"));
    }
    Ok(r * c_max as f64 / b_tot as f64)
}

#[allow(clippy::too_many_arguments)]
pub fn theorem1_bound(
    n: usize,
    d_max: usize,
    c_max: u32,
    beta: f64,
    delta: f64,
    rho: f64,
    b_tot: usize,
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::param("n", format!("{n} must be at least 2")));
    }
    if !(delta > 0.0) {
        return Err(Error::param("delta", format!("{delta} must be > 0")));
    }
    if !(beta >= 0.0 && rho >= 0.0) {
        return Err(Error::param("beta/rho", "must be >= 0"));
    }
    let naive_threshold = expected_threshold(beta / delta, c_max, b_tot)?;
    if c_max == 0 {
        return Ok(BoundReport {
            epsilon: f64::INFINITY,
            inflation: 1.0,
            required_rho: -delta,
            condition_holds: true,
            extinction_bound: Some(n as f64 / (rho + delta)),
            corollary_threshold: -1.0,
            naive_threshold,
            degenerate: true,
        });
    }
    if d_max == 0 {
        return Err(Error::param("d_max", "must be at least 1 when C_max > 0"));
    }
    let c = c_max as f64;
    let epsilon = d_max as f64 * (1.0 + (n as f64).ln()) / c;
    let inflation = 1.0 + 2.0 * epsilon.sqrt() + epsilon;
    let spread = beta * c * inflation;
    let required_rho = spread - delta;
    let condition_holds = rho > required_rho;
    Ok(BoundReport {
        epsilon,
        inflation,
        required_rho,
        condition_holds,
        extinction_bound: condition_holds.then(|| n as f64 / (rho + delta - spread)),
        corollary_threshold: beta / delta * c * inflation - 1.0,
        naive_threshold,
        degenerate: false,
    })
}

/// Bound report for a concrete graph and plan.
pub fn theorem1_for_plan(
    graph: &Graph,
    order: &LinearArrangement,
    params: &DiffusionParams,
    b_tot: usize,
) -> Result<BoundReport> {
    let c_max = max_cutwidth(graph, order)?;
    theorem1_bound(
        graph.n_nodes(),
        graph.max_degree(),
        c_max,
        params.beta(),
        params.delta(),
        params.rho(),
        b_tot,
    )
}

const XI_TOLERANCE: f64 = 1e-12;

/// Positive root of `ξ − ln(1 + ξ) = a`.
pub fn solve_xi(a: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::param("a", format!("{a} must be finite and >= 0")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let g = |x: f64| x - x.ln_1p() - a;
    let (mut lo, mut hi) = (0.0f64, a + 2.0 * a.sqrt() + 1.0);
    // For large `a` the float spacing near the root exceeds the tolerance;
    // stop once the midpoint no longer moves.
    while hi - lo > XI_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if g(lo).abs() <= g(hi).abs() { lo } else { hi })
}

/// How a single efficiency value is judged.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSettings {
    pub n_runs: usize,
    /// Horizon in units of `N/δ`.
    pub horizon_multiplier: f64,
    pub success_fraction: f64,
    /// The search gives up once `e_high` exceeds `cap_factor · r C_max / b_tot`.
    pub cap_factor: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings {
            n_runs: 100,
            horizon_multiplier: 10.0,
            success_fraction: 0.8,
            cap_factor: 10.0,
        }
    }
}

impl ProbeSettings {
    fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::param("n_runs", "must be at least 1"));
        }
        if !(self.horizon_multiplier > 0.0 && self.horizon_multiplier.is_finite()) {
            return Err(Error::param("horizon_multiplier", "must be finite and > 0"));
        }
        if !(self.success_fraction > 0.0 && self.success_fraction <= 1.0) {
            return Err(Error::param("success_fraction", "must lie in (0, 1]"));
        }
        if !(self.cap_factor >= 1.0) {
            return Err(Error::param("cap_factor", "must be >= 1"));
        }
        Ok(())
    }
}

/// One probe of the threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub e: f64,
    pub runs_done: usize,
    pub extinct: usize,
    pub extinction_fraction: f64,
    pub mean_tau: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    /// Midpoint of the final bracket, or 0 when no resources are needed.
    pub e_star: f64,
    /// Largest failing and smallest succeeding efficiency seen (`e_low` is 0
    /// if never probed).
    pub bracket: (f64, f64),
    pub c_max: u32,
    pub naive_threshold: f64,
    pub settings: ProbeSettings,
    pub probes: Vec<ProbeRecord>,
}

impl ThresholdEstimate {
    pub fn width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Bisection for the smallest resource efficiency `e` under which the plan
/// extinguishes an all-infected start within `horizon_multiplier · N`
/// (δ = 1, β = r) in at least `success_fraction` of the runs. Every probe
/// uses the same seeds.
pub fn estimate_threshold(
    graph: &Graph,
    order: &LinearArrangement,
    r: f64,
    b_tot: usize,
    settings: &ProbeSettings,
    tol: f64,
    seed: RngSeed,
) -> Result<ThresholdEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("r", format!("{r} must be finite and > 0")));
    }
    if b_tot == 0 {
        return Err(Error::param("b_tot", "must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("{tol} must be > 0")));
    }
    settings.validate()?;
    let c_max = if graph.n_nodes() >= 2 { max_cutwidth(graph, order)? } else { 0 };
    let naive = expected_threshold(r, c_max, b_tot)?;
    let strategy = Strategy::PriorityPlanning(order.clone());
    let config = SimConfig::with_horizon(settings.horizon_multiplier * graph.n_nodes() as f64);
    let mut probes = Vec::new();
    let mut probe = |e: f64| -> Result<bool> {
        let params = DiffusionParams::normalized(r, e, b_tot)?;
        let out = run_probe(
            graph,
            &params,
            &strategy,
            &InitialCondition::AllInfected,
            settings.n_runs,
            settings.success_fraction,
            seed,
            &config,
        )?;
        log::debug!("probe e={e} extinct={}/{} success={}", out.extinct, out.runs_done, out.success);
        probes.push(ProbeRecord {
            e,
            runs_done: out.runs_done,
            extinct: out.extinct,
            extinction_fraction: out.extinction_fraction(),
            mean_tau: out.mean_tau,
            success: out.success,
        });
        Ok(out.success)
    };

    let (mut lo, mut hi);
    if naive == 0.0 {
        if !probe(0.0)? {
            return Err(Error::ThresholdCapExceeded { cap: 0.0 });
        }
        (lo, hi) = (0.0, 0.0);
    } else {
        let cap = settings.cap_factor * naive;
        hi = naive;
        lo = 0.0;
        while !probe(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > cap * (1.0 + 1e-12) {
                return Err(Error::ThresholdCapExceeded { cap });
            }
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if probe(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(ThresholdEstimate {
        e_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        c_max,
        naive_threshold: naive,
        settings: settings.clone(),
        probes,
    })
}
