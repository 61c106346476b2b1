mod catalog;
mod commands;
mod config;
mod experiment;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use catalog::{MissingParam, Model, StrategyKind};

#[derive(Parser, Debug)]
#[command(name = "cutplan", version, about = "Priority planning against SIS contagions on networks")]
struct Cli {
    /// Worker threads for ensembles and experiments (default: all cores).
    #[arg(long, global = true, env = "CUTPLAN_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random network and write it as an edge list.
    Gen(GenArgs),
    /// Compute a node ordering and its cutwidth profile.
    Order(OrderArgs),
    /// Simulate the controlled contagion and summarize extinction times.
    Simulate(SimulateArgs),
    /// Estimate the epidemic threshold of a priority plan.
    Threshold(ThresholdArgs),
    /// Evaluate the extinction-time bound and threshold estimates.
    Bound(BoundArgs),
    /// Run an experiment described by a key=value config file.
    Experiment(ExperimentArgs),
}

#[derive(clap::Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (er).
    #[arg(long)]
    pub p: Option<f64>,
    /// Edges per new node (ba).
    #[arg(long)]
    pub m: Option<usize>,
    /// Ring neighbors, even (ws).
    #[arg(long)]
    pub k: Option<usize>,
    /// Rewiring probability (ws).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Connection radius in the unit square (geo).
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct OrderArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub strategy: StrategyKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Arrangement file: one node id per line, first line is position 1.
    #[arg(long)]
    pub out: PathBuf,
    /// Cut profile CSV (default: `<out>.cuts.csv`).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Exponent of the reported p-sum cost and of the annealing surrogate;
    /// 0 anneals the maximum cutwidth directly and reports p = 1.
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    /// Cluster count for mcm (default ⌈√N/2⌉).
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Cap on proposed swaps per annealing run (mcm).
    #[arg(long)]
    pub swap_iterations: Option<usize>,
    /// Recompute the eigenvector every this many removals (lrsr).
    #[arg(long)]
    pub lrsr_every: Option<usize>,
}

#[derive(clap::Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Priority order; without it no resources are used.
    #[arg(long)]
    pub order: Option<PathBuf>,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    /// Constant budget `b`, or a schedule `t0:b0,t1:b1,...` starting at t0 = 0.
    #[arg(long, default_value = "1")]
    pub budget: String,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Censoring time (default 50·N/δ).
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Spacing of the sampled infected-count curves.
    #[arg(long)]
    pub sample_dt: Option<f64>,
    /// Initially infected node ids, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub infected: Option<Vec<usize>>,
    /// Also dump the event log of the first run.
    #[arg(long)]
    pub events: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, conflicts_with = "strategy", required_unless_present = "strategy")]
    pub order: Option<PathBuf>,
    /// Compute the order in place instead of reading it.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyKind>,
    /// Effective spreading rate β/δ.
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 1)]
    pub budget: usize,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 10.0)]
    pub horizon_mult: f64,
    #[arg(long, default_value_t = 0.8)]
    pub success: f64,
    #[arg(long, default_value_t = 10.0)]
    pub cap_factor: f64,
    /// Final bracket width on e.
    #[arg(long)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct BoundArgs {
    /// Read N, d_max and C_max from a graph and order instead.
    #[arg(long, requires = "order")]
    pub graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    pub order: Option<PathBuf>,
    #[arg(long, required_unless_present = "graph")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "graph")]
    pub d_max: Option<usize>,
    #[arg(long, required_unless_present = "graph")]
    pub c_max: Option<u32>,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1)]
    pub budget: usize,
    /// Also write the report as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct ExperimentArgs {
    pub config: PathBuf,
    /// Overrides `experiment.out_dir`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            Cli::command()
                .error(clap::error::ErrorKind::ValueValidation, "--jobs must be at least 1")
                .exit();
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Order(a) => commands::order(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Threshold(a) => commands::threshold(a),
        Command::Bound(a) => commands::bound(a),
        Command::Experiment(a) => experiment::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(m) = e.downcast_ref::<MissingParam>() {
                Cli::command()
                    .error(clap::error::ErrorKind::MissingRequiredArgument, m.to_string())
                    .exit();
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
