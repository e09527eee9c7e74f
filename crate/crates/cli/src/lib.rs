//! Command-line front end for `chandist`.
//!
//! Every command writes `#`-prefixed lines echoing its effective
//! configuration, then a CSV header row and data rows.

pub mod commands;
pub mod error;
pub mod format;
pub mod spec;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "chandist", version, about = "Trace and diamond distances between single-qubit channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for the random search (0 uses every core). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two channels.
    Dist(DistArgs),
    /// Distances over a grid of parameter values.
    Sweep(SweepArgs),
    /// Convergence of the random search with the number of trials.
    Converge(ConvergeArgs),
    /// Bell-state input against the trace distance for the +z displacement.
    BellCompare(BellArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Search over system-ancilla inputs in the Fano representation.
    F,
    /// Maximum output fidelity.
    K,
    /// Trace distance only, without an ancilla.
    Trace,
    /// Closed forms for Pauli channels.
    PauliAnalytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampling {
    Mixed,
    Pure,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Random trials per search.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Restrict ancilla inputs to real amplitudes (f algorithm).
    #[arg(long)]
    pub real_only: bool,
    /// Polish the best trial with a local coordinate search.
    #[arg(long)]
    pub refine: bool,
    /// Input states for the k algorithm.
    #[arg(long, value_enum, default_value_t = Sampling::Mixed)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// First channel: a JSON spec file or inline JSON.
    pub spec1: String,
    pub spec2: String,
    #[arg(long, value_enum, default_value_t = Algorithm::F)]
    pub alg: Algorithm,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub spec1: String,
    pub spec2: String,
    /// `name:start:stop:steps`; bounds accept multiples of pi such as `pi/2`.
    #[arg(long = "grid", required = true)]
    pub grids: Vec<String>,
    #[arg(long, value_enum, default_value_t = Algorithm::F)]
    pub alg: Algorithm,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(required_unless_present = "self_test")]
    pub spec1: Option<String>,
    #[arg(required_unless_present = "self_test")]
    pub spec2: Option<String>,
    /// Exact diamond distance of the pair.
    #[arg(long, conflicts_with = "auto")]
    pub reference: Option<String>,
    /// Take the reference from the Pauli closed form.
    #[arg(long)]
    pub auto: bool,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, value_enum, default_value_t = Algorithm::F)]
    pub alg: Algorithm,
    /// Replace the search by a planted power law with this exponent.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["spec1", "spec2", "reference", "auto"])]
    pub self_test: Option<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    /// Grid points on `[0, pi/2]`.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs `cli`, writing reports to `out` (CSV goes to `--out` when given).
pub fn run(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", cli.threads)))?;
    pool.install(|| match &cli.command {
        Command::Dist(a) => commands::dist(a, out),
        Command::Sweep(a) => commands::sweep(a, out),
        Command::Converge(a) => commands::converge(a, out),
        Command::BellCompare(a) => commands::bell_compare(a, out),
    })
}
