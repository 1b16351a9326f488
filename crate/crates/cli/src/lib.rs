//! Command-line front end: configuration loading, the subcommands and the
//! equal-x testbed on a product of two elliptic curves.

pub mod commands;
pub mod config;
pub mod testbed;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{run, CommandOutput};
pub use config::WorkbenchConfig;
pub use testbed::{enumerate_testbed, recheck_pairs, TestbedPair, TestbedResult};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ntbench::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for bad input or config, 3 for a failed certificate, 4 for a
    /// resource limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "ntbench",
    version,
    about = "Heights, lattices and explicit point counts on abelian varieties"
)]
pub struct Cli {
    /// TOML or JSON config (JSON when the extension is `.json`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for generated test data, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the command's table as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical height of one point.
    Height {
        /// Curve coefficients `a4,a6`.
        #[arg(long, conflicts_with = "label", allow_hyphen_values = true)]
        curve: Option<String>,
        /// Label of a configured curve.
        #[arg(long)]
        label: Option<String>,
        /// `x,y` or `O`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Gram matrix, determinant and spectrum of a lattice.
    Lattice {
        /// Curves whose generator lattices are summed; the config lattice
        /// when absent.
        #[arg(long = "curve")]
        curves: Vec<String>,
    },
    /// Cone cover and greedy ball cover of the lattice points in a ball.
    Pack {
        #[arg(long)]
        c4: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        sub_radius: Option<f64>,
    },
    /// Degree quantities of a subvariety from `(g, r, d, l)`.
    Degrees {
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        /// Polarization type `d1,d2,...` for the Pfaffian identities.
        #[arg(long = "type")]
        kind: Option<String>,
    },
    /// Explicit constants of the point count.
    Ledger,
    /// Counting pipeline on configured or generated points.
    Pipeline,
    /// Covering procedure on random finite-field instances.
    Cover {
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Equal-x pairs on a product of two curves.
    Testbed,
}
