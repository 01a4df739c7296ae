//! `icmn`: delivery ratio of epidemic routing versus packet size and delay.
//!
//! Every subcommand writes CSV with a header row to stdout or `--out`.
//! Exit codes: 0 success, 1 configuration or input error, 2 some grid
//! points failed, 3 I/O error.

mod commands;
mod config;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "icmn",
    version,
    about = "Epidemic routing delivery ratio in Markovian temporal graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact delivery probability (alpha <= 1) or bounds (alpha > 1) over a grid.
    Analytic(AnalyticArgs),
    /// Monte Carlo delivery ratio over a grid.
    Simulate(SimulateArgs),
    /// Contact statistics and fitted link model of a trace.
    Stats(StatsArgs),
    /// Replay epidemic routing on a trace.
    Replay(ReplayArgs),
    /// Sample a Markovian temporal graph as an event trace.
    Generate(GenerateArgs),
}

/// Scenario flags. Grid-valued flags accept `x`, `a,b,c` and `lo..hi[:step]`.
#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// `key=value` file providing defaults for n, tau, alpha, d, r, lambda.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Node count [default: 20].
    #[arg(long)]
    pub n: Option<String>,
    /// Mean link lifetime in steps [default: 2].
    #[arg(long)]
    pub r: Option<String>,
    /// Ratio of mean down-time to up-time [default: 10].
    #[arg(long)]
    pub lambda: Option<String>,
    /// Packet size in link capacities [default: 1].
    #[arg(long)]
    pub alpha: Option<String>,
    /// Maximum delay in steps [default: 5].
    #[arg(long)]
    pub d: Option<String>,
    /// Step duration in seconds [default: 15].
    #[arg(long)]
    pub tau: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, env = "ICMN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// Contact trace file.
    #[arg(long)]
    pub trace: PathBuf,
    /// `interval` (a,b,start,end) or `event` (t,a,b,up|down).
    #[arg(long, default_value = "interval")]
    pub format: String,
    /// Sampling period in seconds.
    #[arg(long, default_value_t = 15.0)]
    pub tau: f64,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub trace: TraceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[command(flatten)]
    pub trace: TraceArgs,
    /// Packet sizes (grid).
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Delay budgets in steps (grid).
    #[arg(long, default_value = "4")]
    pub d: String,
    /// Start times are drawn in [0, start-window) seconds.
    #[arg(long, default_value_t = 2000.0)]
    pub start_window: f64,
    /// Seconds between start times [default: tau].
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Source/destination pairs per start time.
    #[arg(long, default_value_t = 60)]
    pub pairs: usize,
    /// Share of a step a contact must cover to count as a link.
    #[arg(long, default_value_t = 0.5)]
    pub coverage: f64,
    /// Also report, per delay, the largest alpha reaching this ratio.
    #[arg(long)]
    pub target_ratio: Option<f64>,
    #[arg(long, env = "ICMN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    #[arg(long, default_value_t = 10.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 15.0)]
    pub tau: f64,
    /// Number of steps to sample.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, env = "ICMN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
