//! Command-line front end for the closedgeo engine.
//!
//! Exit codes: 0 success, 1 Unknown for lack of data, 2 input error,
//! 3 self-check failure.

pub mod commands;
pub mod report;
pub mod selfcheck;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{run, CliError};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA_MISSING: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SELFCHECK: i32 = 3;

/// Default page truncation for `ss`.
pub const DEFAULT_TRUNCATION: u32 = 40;

#[derive(Debug, Parser)]
#[command(name = "closedgeo", version, about = "Exact invariants of graded algebras over prime fields and closed-geodesic verdicts")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Poincaré series of a presentation.
    Series {
        file: PathBuf,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=4096))]
        max_degree: u32,
    },
    /// Depth, Ext(F, A) and the Gorenstein property.
    Depth { file: PathBuf },
    /// The four ellipticity conditions of a Hopf algebra.
    Elliptic { file: PathBuf },
    /// Runs the loop-space spectral sequence with given differentials.
    Ss {
        cohomology: PathBuf,
        loop_homology: PathBuf,
        /// Dimension of the manifold.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=256))]
        dim: u32,
        /// Must match the prime of both files when given.
        #[arg(long)]
        prime: Option<u64>,
        /// Largest total degree `s + t` kept on every page.
        #[arg(long, env = "CLOSEDGEO_TRUNCATE", default_value_t = DEFAULT_TRUNCATION,
              value_parser = clap::value_parser!(u32).range(1..=512))]
        truncate: u32,
        #[arg(long)]
        differentials: Option<PathBuf>,
        /// Skip the vanishing checks in degrees 1 and n - 1.
        #[arg(long)]
        not_simply_connected: bool,
    },
    /// Verdict for a catalog space or a record file.
    Verdict {
        /// A catalog name such as `Q(4,2)`, or the path of a record file.
        space: String,
        /// Primes above this bound are ignored.
        #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(2..=97))]
        prime_bound: u64,
        /// Largest family parameter accepted for catalog names.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
        family_bound: u32,
    },
    /// Verdicts for the whole builtin catalog.
    Catalog {
        #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(2..=97))]
        prime_bound: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
        family_bound: u32,
    },
    /// Seeded randomized checks of the engine.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per check.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..=10000))]
        cases: u32,
    },
}
