//! `escape-lab`: curvature scans, minimal geodesic loop tables, and
//! escape-rate estimates for doubly warped-product open manifolds.
//!
//! Exit codes: 0 success, 2 validation failure (bad config or violated
//! preconditions), 3 numeric failure.

// `!(x > 0.0)` rejects NaN along with out-of-range values; keep the idiom.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod artifact;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use artifact::Meta;
use config::{Overrides, RunConfig};
use escape_lab_core::Error;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            _ => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "escape-lab", version, about)]
struct Cli {
    /// Experiment config (INI key=value sections, or JSON)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides [output] dir)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Table format (overrides [output] format)
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Worker thread cap (fallback: ESCAPE_LAB_THREADS)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Geometric winding ladder (overrides [ladder])
    #[arg(long, global = true, value_name = "L0:RATIO:COUNT")]
    ladder: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ricci scan: curvature table + positivity report
    Curvature,
    /// Minimal geodesic loop table over the winding ladder
    Loop,
    /// Escape-rate estimate and orbit diagnostics
    Escape {
        /// Reuse a previously written loop table instead of recomputing
        #[arg(long, value_name = "CSV")]
        table: Option<PathBuf>,
    },
    /// Grid shortest-path cross-check of one winding class
    Oracle,
    /// Full pipeline: curvature, loop, escape, oracle
    All,
}

fn init_threads(flag: Option<usize>) -> Result<(), CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("ESCAPE_LAB_THREADS") {
            Ok(s) => Some(s.parse::<usize>().map_err(|_| {
                Error::Parse(format!("ESCAPE_LAB_THREADS: bad value {s:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(Error::InvalidParameter("thread count must be >= 1".into()).into());
        }
        // ignore the error if a pool already exists (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads(cli.threads)?;
    let overrides = Overrides {
        out: cli.out.clone(),
        format: cli.format.clone(),
        ladder: cli.ladder.clone(),
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let meta = Meta::from_canonical(&cfg.canonical);
    let paths = match &cli.cmd {
        Cmd::Curvature => commands::cmd_curvature(&cfg, &meta)?,
        Cmd::Loop => commands::cmd_loop(&cfg, &meta)?,
        Cmd::Escape { table } => commands::cmd_escape(&cfg, &meta, table.as_deref())?,
        Cmd::Oracle => commands::cmd_oracle(&cfg, &meta)?,
        Cmd::All => commands::cmd_all(&cfg, &meta)?,
    };
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("escape-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
