//! `gridcable`: grid diagrams, cables and their Floer-theoretic invariants
//! from the command line. Results go to stdout as JSON.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gridcable::{CableMode, Limits};

use crate::commands::Status;
use crate::record::RunRecord;

#[derive(Debug, Parser)]
#[command(name = "gridcable", version, about = "Grid diagrams, cables and transverse invariants")]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true, env = "GRIDCABLE_WORKERS")]
    workers: Option<usize>,
    /// Largest grid number whose states may be streamed.
    #[arg(long, global = true, env = "GRIDCABLE_ENUMERATION_LIMIT", default_value_t = Limits::default().enumeration)]
    enumeration_limit: usize,
    /// Largest grid number whose full complex may be held in memory.
    #[arg(long, global = true, env = "GRIDCABLE_MATERIALIZATION_LIMIT", default_value_t = Limits::default().materialization)]
    materialization_limit: usize,
    /// Also write a run record (JSON) to this file.
    #[arg(long, global = true)]
    record: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a grid file.
    Validate { grid: PathBuf },
    /// Thurston–Bennequin, rotation and self-linking numbers.
    Invariants { grid: PathBuf },
    /// Build a (p, q)-cable grid and its plan sidecar.
    Cable {
        grid: PathBuf,
        #[command(flatten)]
        cable: CableArgs,
        /// Output grid file.
        #[arg(long)]
        out: PathBuf,
        /// Plan sidecar (default: the output path with a `.json` extension).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Whether the transverse invariant θ̂ vanishes.
    Theta {
        grid: PathBuf,
        /// Also decide it through the U-image of the full homology.
        #[arg(long)]
        cross_check: bool,
    },
    /// Whether the Legendrian invariant η vanishes.
    Eta { grid: PathBuf },
    /// The concordance invariant τ of a knot.
    Tau { grid: PathBuf },
    /// Homology of a grid complex as an F2[U]-module.
    Homology {
        grid: PathBuf,
        #[arg(long, value_enum, default_value_t = ComplexKind::Full)]
        complex: ComplexKind,
        /// Multiplier for the `pc` complex.
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Destination of the gzip complex dump.
        #[arg(long, required_if_eq("format", "gzip"))]
        out: Option<PathBuf>,
    },
    /// Check a structural claim on the cable of a grid; exits 2 when it fails.
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        grid: PathBuf,
        #[command(flatten)]
        cable: CableArgs,
    },
    /// Runs over a directory of grid files.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// Every invariant on every `*.grid` file, in name order.
    RunAll {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus"))]
        dir: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CableArgs {
    /// Number of strands.
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Cabling coefficient in the front convention (default: the lower end
    /// of the construction range).
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<i64>,
    #[arg(long, value_enum, default_value_t = Mode::Transverse)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Legendrian,
    Transverse,
}

impl From<Mode> for CableMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Legendrian => CableMode::Legendrian,
            Mode::Transverse => CableMode::Transverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplexKind {
    Full,
    Pc,
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Gzip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    ChainMap,
    Identity3,
    Splitting,
    Theorem1,
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global()?;
    }
    let limits = Limits { enumeration: cli.enumeration_limit, materialization: cli.materialization_limit };
    let start = Instant::now();
    let out = match &cli.command {
        Command::Validate { grid } => commands::validate(grid)?,
        Command::Invariants { grid } => commands::invariants(grid)?,
        Command::Cable { grid, cable, out, sidecar } => commands::cable(grid, cable, out, sidecar.as_deref())?,
        Command::Theta { grid, cross_check } => commands::theta(grid, *cross_check, &limits)?,
        Command::Eta { grid } => commands::eta(grid, &limits)?,
        Command::Tau { grid } => commands::tau(grid, &limits)?,
        Command::Homology { grid, complex, p, format, out } => {
            commands::homology(grid, *complex, *p, *format, out.as_deref(), &limits)?
        }
        Command::Verify { claim, grid, cable } => commands::verify(*claim, grid, cable, &limits)?,
        Command::Corpus { action: CorpusAction::RunAll { dir } } => commands::corpus_run_all(dir, &limits)?,
    };
    let timings = serde_json::json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 });

    let mut shown = out.verdicts.clone();
    if out.timed {
        shown["timings"] = timings.clone();
    }
    println!("{}", serde_json::to_string(&shown)?);
    if let Some(path) = &cli.record {
        RunRecord::new(out.command, out.input_digest, out.parameters, out.verdicts, timings).write(path)?;
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerdictFalse) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
