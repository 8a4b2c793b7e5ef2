//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Interlacing-family partitioning of isotropic vector systems, mixed
/// characteristic polynomials and barrier certificates.
#[derive(Debug, Parser)]
#[command(name = "kadison", version)]
pub struct Cli {
    /// JSON file overriding numeric tolerances; absent fields keep their
    /// defaults. The policy in effect is echoed into every report.
    #[arg(long, global = true, value_name = "FILE")]
    pub numeric_policy: Option<PathBuf>,
    /// Worker threads. Output does not depend on the count.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Partition an instance into r parts by interlacing-family descent.
    Partition(PartitionArgs),
    /// Mixed characteristic polynomial of an ensemble's covariances.
    Mixed(MixedArgs),
    /// Barrier certificate bounding the largest root of the mixed
    /// characteristic polynomial.
    Certify(CertifyArgs),
    /// Experiments that write CSV rows.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// `1/δ` copies of `√δ e_i` for each of the `n` basis vectors.
    Diagonal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        out: Output,
    },
    /// `n/δ` Gaussian vectors whitened to be isotropic.
    Gaussian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        out: Output,
    },
    /// Normalised edge vectors of a connected graph.
    Graph {
        /// Edge list, one `a b [weight]` line per edge, 0-indexed; `-` reads stdin.
        #[arg(long, value_name = "FILE")]
        edges: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub input: Input,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Include the per-level descent trace.
    #[arg(long)]
    pub trace: bool,
    /// Renormalise a nearly isotropic instance before partitioning.
    #[arg(long)]
    pub repair: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct MixedArgs {
    /// Ensemble or instance file; `-` reads stdin.
    #[command(flatten)]
    pub input: Input,
    /// Also expand the expectation over every outcome and compare.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Instance (rank-one matrices `u u*`) or ensemble (covariances).
    #[command(flatten)]
    pub input: Input,
    /// Trace bound; defaults to the largest trace.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Random directions probed per above-the-roots check.
    #[arg(long, default_value_t = 16)]
    pub rays: usize,
    #[command(flatten)]
    pub seed: Seed,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Uniformly random partitions against a norm threshold.
    Chernoff(ChernoffArgs),
    /// Root interval of `(1 − (δ/n) d/dx)^{m/2} xⁿ`, `m = n/δ`.
    Laguerre(LaguerreArgs),
}

#[derive(Debug, Args)]
pub struct ChernoffArgs {
    /// Use `gen diagonal --n N --delta D` instead of an input file.
    #[arg(long, requires_all = ["n", "delta"], conflicts_with = "input")]
    pub diagonal: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Instance file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// A part succeeds when its norm is at most this.
    #[arg(long, default_value_t = 1.0 - 1e-9)]
    pub threshold: f64,
    #[command(flatten)]
    pub seed: Seed,
    /// Per-trial rows; `-` writes to stdout instead of the summary.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<String>,
    /// Summary report.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct LaguerreArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    /// Rows for dimensions `n·k/steps`, `k = 1..=steps`.
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Slack around the asymptotic interval.
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
    /// Rows; `-` writes to stdout instead of the summary.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<String>,
    /// Summary report.
    #[arg(long, value_name = "FILE")]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input file; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE", default_value = "-")]
    pub path: String,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; `-` writes stdout.
    #[arg(long, value_name = "FILE", default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct Seed {
    #[arg(long, env = "KS_SEED", default_value_t = 0)]
    pub seed: u64,
}
