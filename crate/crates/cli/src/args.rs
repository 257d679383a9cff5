use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "isoppp", version, about = "Interference, outage and throughput in isotropic Poisson networks")]
pub struct Cli {
    /// Re-read a CSV written by this tool and check that every value round-trips.
    #[arg(long, value_name = "FILE")]
    pub replot_check: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean interference at the receiver offset.
    Mean(Common),
    /// Laplace transform of the interference at --s (Rayleigh fading).
    Laplace(Common),
    /// Exact outage probability (Rayleigh fading).
    Outage(Common),
    /// Log-divergence of the locally stationary approximation (alpha = 4, c = 0).
    Divergence(Common),
    /// Relative error of the locally stationary approximation.
    Relerror(Common),
    /// Local transmission capacity for outage constraint --epsilon.
    Capacity(Common),
    /// Frequency-hopping over direct-sequence capacity gain at the origin (alpha = 2).
    Fhds(Common),
    /// Accuracy loss of the co-located carrier-sensing model.
    Csma(Common),
    /// Dominant-interferer lower bound and Markov upper bound on P(I >= z).
    Bounds(Common),
    /// Monte-Carlo estimate of the statistic chosen by --sim-task.
    Simulate(Common),
    /// Run any task over the --sweep grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub task: TaskKind,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Mean,
    Laplace,
    Outage,
    Divergence,
    Relerror,
    Capacity,
    Fhds,
    Csma,
    Bounds,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FadingArg {
    Rayleigh,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimKind {
    Mean,
    Tail,
    Outage,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every task. Unset values come from --scenario-file, then from defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Shape as JSON (`{"scenario":"C","params":{"rho":50}}`) or a bare scenario name.
    #[arg(long)]
    pub shape: Option<String>,
    /// JSON file with a shape and any of the numeric settings below.
    #[arg(long, value_name = "FILE")]
    pub scenario_file: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Mean SNR in dB; omitted means a noiseless receiver.
    #[arg(long, allow_hyphen_values = true)]
    pub eta_db: Option<f64>,
    /// Laplace transform variable.
    #[arg(long)]
    pub s: Option<f64>,
    /// Interference level for tail statistics.
    #[arg(long)]
    pub z: Option<f64>,
    /// Processing gain.
    #[arg(long = "m", alias = "M")]
    pub m: Option<f64>,
    /// Outage constraint for the capacity.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Carrier-sensing threshold (linear).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Carrier-sensing threshold in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_db: Option<f64>,
    #[arg(long, value_enum)]
    pub fading: Option<FadingArg>,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Neglected far-field mean as a fraction of the mean.
    #[arg(long)]
    pub truncation_tol: Option<f64>,
    /// Fixed simulation radius instead of the automatic truncation.
    #[arg(long)]
    pub max_radius: Option<f64>,
    #[arg(long, value_enum)]
    pub sim_task: Option<SimKind>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Sweep axis: `name=start:stop:step`, `name=log:start:stop:count` or `name=v1,v2,..`.
    /// Axes: y0, d, z, s, M, beta, lambda, delta. Repeat for a grid (first axis outermost).
    #[arg(long, value_name = "AXIS")]
    pub sweep: Vec<String>,
}
