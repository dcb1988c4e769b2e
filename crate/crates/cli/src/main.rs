//! `steiner`: construct, extend, verify and classify Steiner systems.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "steiner", version, about = "Steiner systems with prescribed automorphism groups")]
pub struct Cli {
    /// Read all point and item numbers in input files as 1-based.
    #[arg(long, global = true)]
    pub one_based: bool,

    /// Worker threads for parallel work.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Blocks,
    Json,
    Gap,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Exact cover node budget (default: $STEINER_NODE_LIMIT, else unlimited).
    #[arg(long = "nodes", alias = "node-limit", value_name = "L")]
    pub nodes: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a design is an S(t,k,v).
    Verify {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Derived design at a point (`inf` for the last point).
    Derive {
        file: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value = "blocks")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Union of the orbits of base blocks under a group.
    OrbitDesign {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long, value_enum, default_value = "blocks")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit representatives and sizes on s-subsets.
    Orbits {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// All G-invariant S(t,k,v) via the Kramer-Mesner matrix.
    Km {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "max-solutions", alias = "max", value_name = "M")]
        max_solutions: Option<u64>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extensions of an S(t,k,v) to S(t+1,k+1,v+1) with prescribed groups.
    Extend {
        #[arg(long)]
        design: PathBuf,
        /// Extension group; repeat for several independent tasks.
        #[arg(long, required = true)]
        group: Vec<PathBuf>,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "max", value_name = "M")]
        max_solutions: Option<u64>,
        #[command(flatten)]
        budget: Budget,
        /// Write the reduced exact cover instance and skip solving.
        #[arg(long, value_name = "FILE")]
        emit_instance: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact cover instances.
    Xc {
        #[command(subcommand)]
        action: XcAction,
    },
    /// Keep one design per isomorphism class.
    IsoFilter {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Automorphism group generators and order.
    Aut {
        file: PathBuf,
        /// Search node cap.
        #[arg(long, value_name = "L")]
        nodes: Option<u64>,
    },
    /// Admissible parameter sets S(t,k,v) with v <= vmax.
    Admissible {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        vmax: usize,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Write shipped example data.
    Fixtures {
        /// Fixture name, or `all`.
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum XcAction {
    Solve {
        file: PathBuf,
        #[arg(long = "max", value_name = "M")]
        max_solutions: Option<u64>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        count_only: bool,
        /// Directory for the run manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
