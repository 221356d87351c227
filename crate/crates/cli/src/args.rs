use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mdinf_core::Target;

#[derive(Debug, Parser)]
#[command(
    name = "mdinf",
    version,
    about = "Busy-period and busy-cycle distributions of the M/D/inf queue by transform inversion"
)]
pub struct Cli {
    /// Worker threads for the parallel kernels; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CDF table of the busy period.
    BusyPeriod(TableArgs),
    /// CDF table of the busy cycle (idle period plus busy period).
    BusyCycle(TableArgs),
    /// Closed-form moments, optionally checked against the moment recursion.
    Moments(MomentsArgs),
    /// Monte Carlo samples of the busy period or busy cycle.
    Simulate(SimulateArgs),
    /// Recompute a published table and compare it cell by cell.
    ReproduceTable(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    BusyPeriod,
    BusyCycle,
}

impl From<Kind> for Target {
    fn from(k: Kind) -> Self {
        match k {
            Kind::BusyPeriod => Target::BusyPeriod,
            Kind::BusyCycle => Target::BusyCycle,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("grid").required(true).args(["t", "t_range"])))]
pub struct TableArgs {
    /// Arrival rate.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Deterministic service time.
    #[arg(long, allow_negative_numbers = true)]
    pub service: f64,
    /// Accuracy: tolerated shift of the time argument.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: f64,
    /// Precision: tolerated error of the probability, in (0, 0.5).
    #[arg(long, allow_negative_numbers = true)]
    pub dp: f64,
    /// Exponent l of the 10^l safety factor in the truncation window.
    #[arg(long = "l-exponent", default_value_t = 3)]
    pub l_exponent: u32,
    /// Comma-separated time points.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    /// Time points as start:stop:step, stop included.
    #[arg(long = "t-range", allow_hyphen_values = true)]
    pub t_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Add the Chebyshev and atom lower-bound columns.
    #[arg(long)]
    pub with_bounds: bool,
    /// Also write a whitespace-separated (t, cdf) file.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Timestamp recorded verbatim in the manifest.
    #[arg(long)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub service: f64,
    /// Highest raw moment from the recursion, at most 10.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Also run the moment recursion and report its gap to the closed forms.
    #[arg(long)]
    pub recursion: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub service: f64,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points at which to evaluate the empirical CDF.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the sorted samples, one per line.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// One of 3.1, 3.2, 3.3, 4.1, 4.2, 4.3, 4.4.
    pub table_id: String,
    /// Directory for the comparison CSV and report JSON.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub timestamp: Option<String>,
}
