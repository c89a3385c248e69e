use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rightjump",
    version,
    about = "Right-jump distances, basis permutations and their counting sequences"
)]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Triangle cache file, validated on load and extended when too small.
    #[arg(long, global = true, value_name = "FILE")]
    pub cache: Option<PathBuf>,

    /// Report progress of long computations on stderr.
    #[arg(long, global = true)]
    pub progress: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum number of right-jumps turning FROM into TO.
    Distance { from: String, to: String },
    /// Minimum number of right-jumps sorting a permutation.
    SortDistance { sigma: String },
    /// A shortest sequence of right-jumps building a permutation from the identity.
    Jumps { sigma: String },
    /// Basis permutations.
    #[command(subcommand)]
    Basis(BasisCommand),
    /// Exact counts.
    #[command(subcommand)]
    Count(CountCommand),
    /// The triangle b(n,p) and its cache file.
    #[command(subcommand)]
    Triangle(TriangleCommand),
    /// Eventual period of b_n (or of a given recurrence) modulo m.
    Congruence(CongruenceArgs),
    /// Growth constant of b_n/n! and the ratio at n.
    Asymptotics {
        #[arg(long)]
        n: usize,
    },
    /// Distribution of left-to-right maxima over basis permutations of length n.
    Dist(DistArgs),
    /// Run the cross-validation suite.
    Verify {
        /// Skip the slow jobs (m = 3617 and n = 4000).
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BasisCommand {
    /// List B_p, or every basis permutation of length n grouped by p.
    #[command(group(ArgGroup::new("which").required(true).args(["p", "n"])))]
    List {
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decide membership in a basis and report the failing condition.
    Check {
        sigma: String,
        /// Use the deletion-based recognizer instead of the structural one.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CountCommand {
    /// Permutations of length n at jump distance p from the identity.
    D {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Basis permutations of length n, optionally restricted to one p.
    B {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[value(alias = "convolution")]
    Conv,
    Ode,
}

#[derive(Debug, Subcommand)]
pub enum TriangleCommand {
    /// Build the triangle up to max-n and write it to a cache file.
    Build {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "ode")]
        method: Method,
    },
    /// Print row n.
    Show {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct CongruenceArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = rightjump::congruence::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    /// Include one full cycle of residues.
    #[arg(long)]
    pub emit_cycle: bool,
    /// JSON recurrence {order, polys, init, offset}; defaults to b_n.
    #[arg(long, value_name = "FILE")]
    pub recurrence: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub n: usize,
    /// Also write the histogram as CSV.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also write a whitespace-separated data file for plotting.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
}
