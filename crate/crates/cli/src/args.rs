use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Thermodynamic quantities of prefix-free machines, with certified
/// enclosures.
///
/// MACHINE is a catalog name (B, O, U, heavy_tail, heavy_tail(a,b)) or the
/// path of a machine spec file. Rationals are written num/den.
#[derive(Debug, Parser)]
#[command(name = "ait-thermo", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Target enclosure width: 2^-k, num/den, or an integer.
    #[arg(long, global = true, default_value = "2^-30")]
    pub eps: String,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Step budget for the universal machine and for complexity searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub budget: u64,
    /// Longest program tried by complexity searches.
    #[arg(long = "max-len", global = true, default_value_t = 12)]
    pub max_len: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Z, F, E and S at one temperature.
    Eval {
        machine: String,
        /// Temperature num/den.
        #[arg(long = "temp", short = 't')]
        temp: String,
    },
    /// CSV of enclosures over a grid of temperatures in (0, 1).
    Sweep {
        machine: String,
        /// Comma-separated temperatures, each num/den.
        #[arg(long, default_value = "")]
        grid: String,
        /// Comma-separated subset of Z,F,E,S.
        #[arg(long, default_value = "Z,F,E,S")]
        quantities: String,
    },
    /// Spec file of the composite of the given machines, in order.
    Compose {
        #[arg(required = true)]
        machines: Vec<String>,
    },
    /// Dovetailed domain enumeration, saved as a JSON checkpoint.
    Enumerate {
        #[arg(default_value = "U")]
        machine: String,
        /// Checkpoint to resume from and write back to.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Doubling)]
        schedule: ScheduleArg,
    },
    /// Upper bound on program-size complexity, or a compression profile.
    Complexity {
        machine: String,
        /// Target output as a bit string (empty for λ).
        #[arg(long, conflicts_with = "real")]
        target: Option<String>,
        /// Profile the leading bits of this rational num/den.
        #[arg(long, requires = "n_max")]
        real: Option<String>,
        /// Longest prefix profiled.
        #[arg(long = "n-max")]
        n_max: Option<u32>,
    },
    /// Probes that report statistics or certificates rather than values.
    Probe {
        #[command(subcommand)]
        probe: Probe,
    },
}

#[derive(Debug, Subcommand)]
pub enum Probe {
    /// max_n (T n - h_upper(n)) over a compression profile.
    Deficiency {
        machine: String,
        #[arg(long)]
        real: String,
        #[arg(long = "n-max")]
        n_max: u32,
        /// Rate num/den in [0, 1].
        #[arg(long = "temp", short = 't')]
        temp: String,
    },
    /// Least truncation length at which Z exceeds a threshold, for T > 1.
    Divergence {
        machine: String,
        #[arg(long = "temp", short = 't')]
        temp: String,
        /// Threshold num/den.
        #[arg(long)]
        threshold: String,
    },
    /// Physically reasonable and computable measure predicates.
    Predicates { machine: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScheduleArg {
    Doubling,
    Linear,
}
