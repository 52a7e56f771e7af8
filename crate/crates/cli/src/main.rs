//! Command-line runner: deterministic curvature, flow, and change-detection
//! runs over edge-list snapshots. Every invocation writes its artifacts plus
//! a provenance record (resolved config and input hashes) into one output
//! directory, so a run can be reproduced from the record alone.
//!
//! Exit codes: 0 success, 2 input error, 3 configuration error, 4 resource
//! budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netcurv::{Error, FlowConfig, FlowVariant, InputFormat, WeightingConfig, WeightingMode};

mod ops;
mod provenance;

#[derive(Parser)]
#[command(
    name = "netcurv",
    version,
    about = "Forman-Ricci curvature, discrete Ricci flow, and change detection on network snapshots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree and curvature distributions of one snapshot
    Stats(StatsArgs),
    /// Per-edge curvature field and optional dense curvature map
    Curvature(CurvatureArgs),
    /// Ricci flow trace: per-step weights, stats, and the final scheme
    Flow(FlowCmdArgs),
    /// Change detection between two snapshots of one evolving network
    Diff(DiffArgs),
    /// Deterministic synthetic snapshot generation
    Gen(GenArgs),
}

/// Flags shared by every snapshot-consuming subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Input dialect; detected from the content when omitted
    #[arg(long, env = "NETCURV_FORMAT")]
    format: Option<InputFormat>,
    /// How edge and node weights are derived from the input
    #[arg(long, env = "NETCURV_WEIGHTING", default_value = "detour")]
    weighting: WeightingMode,
    /// Path-length cap for detour and augmented weighting
    #[arg(long, env = "NETCURV_CAP", default_value_t = 6)]
    cap: u32,
    /// Weight floor; both the weighting and the flow clamp to it
    #[arg(long, env = "NETCURV_EPSILON", default_value_t = 1e-6)]
    epsilon: f64,
    /// Edge-count ceiling for augmented weighting
    #[arg(long, env = "NETCURV_AUGMENT_BUDGET", default_value_t = 2_000_000)]
    augment_budget: usize,
    /// Worker threads; 0 means one per core
    #[arg(long, env = "NETCURV_THREADS", default_value_t = 0)]
    threads: usize,
    /// Directory receiving every artifact (created when missing)
    #[arg(long, env = "NETCURV_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

impl CommonArgs {
    fn weighting_config(&self) -> WeightingConfig {
        WeightingConfig {
            mode: self.weighting,
            cap: self.cap,
            epsilon_floor: self.epsilon,
            augment_edge_budget: self.augment_budget,
        }
    }
}

/// Flow parameters, shared by `flow` and `diff`.
#[derive(Args)]
struct FlowFlags {
    /// Number of flow steps (K)
    #[arg(long, env = "NETCURV_STEPS", default_value_t = 10)]
    steps: u32,
    /// Step size (dt)
    #[arg(long, env = "NETCURV_DT", default_value_t = 0.8)]
    dt: f64,
    /// Drive: ricci (per-edge) or scalar (endpoint difference)
    #[arg(long, env = "NETCURV_VARIANT", default_value = "ricci")]
    variant: FlowVariant,
    /// Keep node weights fixed instead of refreshing them every step
    #[arg(long, env = "NETCURV_FREEZE_NODE_WEIGHTS")]
    freeze_node_weights: bool,
}

impl FlowFlags {
    fn flow_config(&self, epsilon: f64) -> FlowConfig {
        FlowConfig {
            steps: self.steps,
            dt: self.dt,
            epsilon_floor: epsilon,
            recompute_node_weights: !self.freeze_node_weights,
            variant: self.variant,
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    /// Input edge-list file
    input: PathBuf,
    /// Histogram bin count
    #[arg(long, env = "NETCURV_BINS", default_value_t = 50)]
    bins: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Input edge-list file
    input: PathBuf,
    /// Also write the dense node-by-node curvature map (CSV and PGM)
    #[arg(long, env = "NETCURV_DENSE")]
    dense: bool,
    /// Node-count ceiling for the dense map
    #[arg(long, env = "NETCURV_MAX_DENSE_NODES", default_value_t = 512)]
    max_dense_nodes: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FlowCmdArgs {
    /// Input edge-list file
    input: PathBuf,
    #[command(flatten)]
    flow: FlowFlags,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DiffArgs {
    /// Earlier snapshot
    input_a: PathBuf,
    /// Later snapshot
    input_b: PathBuf,
    /// Similarity threshold t; nodes scoring below it are flagged
    #[arg(long, env = "NETCURV_THRESHOLD", default_value_t = 0.9)]
    threshold: f64,
    /// Compare the raw weightings without evolving them first
    #[arg(long, env = "NETCURV_NO_FLOW")]
    no_flow: bool,
    /// Node-count ceiling for the dense PGM heatmap; above it only the
    /// CSV heatmap is written
    #[arg(long, env = "NETCURV_MAX_HEATMAP_NODES", default_value_t = 512)]
    max_heatmap_nodes: usize,
    #[command(flatten)]
    flow: FlowFlags,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Generator family: preferential-attachment, ring-lattice-rewire, or
    /// erdos-renyi
    #[arg(long, env = "NETCURV_MODEL")]
    model: String,
    /// Node count (n)
    #[arg(long, env = "NETCURV_NODES")]
    nodes: usize,
    /// Links per new node for preferential attachment (m)
    #[arg(long, env = "NETCURV_ATTACH", default_value_t = 2)]
    attach: usize,
    /// Lattice neighbor count for ring-lattice-rewire (k, even)
    #[arg(long, env = "NETCURV_NEIGHBORS", default_value_t = 4)]
    neighbors: usize,
    /// Edge or rewiring probability (p)
    #[arg(long, env = "NETCURV_PROB", default_value_t = 0.0)]
    prob: f64,
    /// RNG seed; the same seed always yields the same file
    #[arg(long, env = "NETCURV_SEED")]
    seed: u64,
    /// Output file name inside the output directory; derived from the
    /// model when omitted
    #[arg(long, env = "NETCURV_OUTPUT")]
    output: Option<String>,
    /// Directory receiving the edge list and provenance record
    #[arg(long, env = "NETCURV_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Stats(args) => ops::stats(&args),
        Command::Curvature(args) => ops::curvature(&args),
        Command::Flow(args) => ops::flow(&args),
        Command::Diff(args) => ops::diff(&args),
        Command::Gen(args) => ops::gen(&args),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Io(_) | Error::EmptyGraph(_) => 2,
        Error::Config(_) | Error::SchemeMismatch(_) => 3,
        Error::Budget(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
