//! `hgraph`: generate graphs, partition them, run kernels on emulated
//! heterogeneous elements, and evaluate the speedup model.

// `!(x > 0.0)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hgraph::engine::Direction;
use hgraph::par::Mode;
use hgraph::partition::Strategy;
use hgraph::runner::AlgorithmKind;
use hgraph::Error;

#[derive(Parser)]
#[command(name = "hgraph", version, about = "Partitioned BSP graph processing on emulated host and accelerator elements")]
struct Cli {
    /// Echo results as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic graph to a file.
    Generate(GenerateArgs),
    /// Partition a graph and report the boundary statistics.
    Partition(PartitionArgs),
    /// Run one kernel and write its report.
    Run(RunArgs),
    /// Repeat runs over a grid of alphas and strategies, one CSV row each.
    Sweep(SweepArgs),
    /// Evaluate the analytical speedup model along one axis.
    Model(ModelArgs),
    /// Compare a hybrid run report with the model's prediction.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GeneratorKind {
    Rmat,
    Uniform,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GeneratorKind,
    #[arg(long)]
    pub scale: u32,
    /// Average out-degree.
    #[arg(long, default_value_t = 16)]
    pub degree: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// RMAT quadrant probabilities.
    #[arg(long, default_value_t = 0.57)]
    pub a: f64,
    #[arg(long, default_value_t = 0.19)]
    pub b: f64,
    #[arg(long, default_value_t = 0.19)]
    pub c: f64,
    /// Attach integer weights in [1, 64).
    #[arg(long)]
    pub weights: bool,
    /// Write a text edge list instead of the binary format.
    #[arg(long)]
    pub text: bool,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Args, Clone)]
pub struct GraphArgs {
    /// Graph file, or `rmat:SCALE:DEGREE[:SEED]` / `uniform:SCALE:DEGREE[:SEED]`.
    #[arg(long)]
    pub graph: Option<String>,
    /// Edge-list input is undirected.
    #[arg(long)]
    pub undirected: bool,
    /// Edge-list input has a weight column.
    #[arg(long)]
    pub weighted: bool,
    /// Add the reverse of every edge after loading.
    #[arg(long)]
    pub symmetrize: bool,
    /// Attach seeded integer weights after loading.
    #[arg(long)]
    pub synth_weights: bool,
}

#[derive(Args, Clone)]
pub struct PlanArgs {
    /// Comma-separated `kind:workers[@throttle=RATE][@mem=BYTES]` list.
    #[arg(long, default_value = "host:1,accel:1")]
    pub elements: String,
    /// Master seed; all other seeds derive from it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Override the derived partitioning seed.
    #[arg(long)]
    pub plan_seed: Option<u64>,
}

#[derive(Args, Clone)]
pub struct ExecArgs {
    /// Source vertex; defaults to a seeded pick among vertices with out-edges.
    #[arg(long)]
    pub source: Option<u32>,
    /// PageRank iterations.
    #[arg(long, default_value_t = 5)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    /// Send one message per boundary edge instead of one per remote vertex.
    #[arg(long)]
    pub no_reduce: bool,
    /// Disable the host's BFS visited bitmap.
    #[arg(long)]
    pub no_bitmap: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::Parallel)]
    pub mode: ModeArg,
    /// Shuffle vertex and partition order per superstep from this seed.
    #[arg(long)]
    pub schedule_seed: Option<u64>,
    /// Emulated interconnect rate in 4-byte edges per second.
    #[arg(long)]
    pub interconnect: Option<f64>,
    /// Sleep so throttled elements also take their throttled wall time.
    #[arg(long)]
    pub pace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Sequential,
    Parallel,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sequential => Mode::Sequential,
            ModeArg::Parallel => Mode::Parallel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Push,
    Pull,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Push => Direction::Push,
            DirectionArg::Pull => Direction::Pull,
        }
    }
}

#[derive(Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Kernel the plan is for; pagerank partitions the transposed graph.
    #[arg(long, default_value = "bfs")]
    pub alg: AlgorithmKind,
    #[arg(long, default_value = "rand")]
    pub strategy: Strategy,
    /// Share of edges kept on the host.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Keep per-vertex arrays in the written plan regardless of size.
    #[arg(long)]
    pub full: bool,
    /// Write the plan as JSON.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[arg(long, required_unless_present = "config")]
    pub alg: Option<AlgorithmKind>,
    #[arg(long, default_value = "rand")]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Reject the run unless the kernel communicates in this direction.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Repeat the run described by a config or report JSON file.
    #[arg(long, conflicts_with_all = ["alg", "graph"])]
    pub config: Option<PathBuf>,
    /// Report JSON path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Per-vertex results, one `vertex value` line each.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Ledger flattened to one CSV row per superstep, partition and phase.
    #[arg(long)]
    pub ledger_csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub exec: ExecArgs,
    #[arg(long)]
    pub alg: AlgorithmKind,
    #[arg(long, default_value = "0.5,0.6,0.7,0.8,0.9,1.0")]
    pub alphas: String,
    #[arg(long, default_value = "rand,high,low")]
    pub strategies: String,
    /// CSV path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ModelArgs {
    /// alpha, beta, r_cpu or bytes_per_edge_message.
    #[arg(long, default_value = "alpha")]
    pub axis: hgraph::model::Axis,
    #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
    pub grid: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    /// Host processing rate, edges per second.
    #[arg(long, default_value_t = 1e9)]
    pub rcpu: f64,
    #[arg(long, default_value_t = 4e9)]
    pub rgpu: f64,
    /// Interconnect rate, 4-byte edges per second.
    #[arg(long, default_value_t = 3e9)]
    pub c: f64,
    /// Bytes per boundary-edge message.
    #[arg(long, default_value_t = 4.0)]
    pub bytes: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Report of a single-host run.
    #[arg(long)]
    pub baseline: PathBuf,
    /// Report of the hybrid run.
    #[arg(long)]
    pub hybrid: PathBuf,
    /// Interconnect rate; defaults to the hybrid run's emulated rate, else 3e9.
    #[arg(long)]
    pub c: Option<f64>,
}

/// Exit status for a failure.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Validation(_) | Error::Configuration(_)) => 2,
        Some(Error::Capacity { .. }) => 3,
        Some(Error::Io { .. }) => 4,
        Some(Error::Aborted { .. }) | None => 5,
    }
}

fn kind_name(err: &anyhow::Error) -> &'static str {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) => "parse",
        Some(Error::Validation(_)) => "validation",
        Some(Error::Configuration(_)) => "configuration",
        Some(Error::Capacity { .. }) => "capacity",
        Some(Error::Io { .. }) => "io",
        Some(Error::Aborted { .. }) => "aborted",
        None => "internal",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a, json),
        Command::Partition(a) => commands::partition(a, json),
        Command::Run(a) => commands::run(a, json),
        Command::Sweep(a) => commands::sweep(a, json),
        Command::Model(a) => commands::model(a, json),
        Command::Validate(a) => commands::validate(a, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            if json {
                let msg = serde_json::json!({
                    "error": { "kind": kind_name(&err), "message": format!("{err:#}"), "exit_code": code }
                });
                eprintln!("{msg}");
            } else {
                eprintln!("hgraph: {err:#}");
            }
            ExitCode::from(code)
        }
    }
}
