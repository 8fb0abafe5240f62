//! `nonclass`: generate bipartite states, evaluate non-classicality
//! measures and tabulate the standard scans as CSV.

mod commands;
mod error;
mod statefile;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nonclass::{OptimizerConfig, Side};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "nonclass",
    version,
    about = "Non-classical correlations in bipartite states"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Master seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Random restarts per optimized measure
    #[arg(long, global = true, default_value_t = 16)]
    pub restarts: usize,

    /// Objective tolerance of the local searches
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Worker threads (NONCLASS_THREADS takes precedence)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Structured output instead of key=value lines
    #[arg(long, global = true)]
    pub json: bool,
}

impl GlobalOpts {
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            tol: self.tol,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a named state to a state file
    Gen {
        #[command(subcommand)]
        kind: GenKind,

        /// Output path (stdout when omitted)
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },

    /// Evaluate a measure on a state file
    Measure {
        input: PathBuf,

        #[arg(value_enum)]
        measure: MeasureKind,

        /// Subsystem the unitary acts on (lnu) or that is measured (discord)
        #[arg(long, value_enum, default_value_t = SideArg::A)]
        side: SideArg,
    },

    /// MID and discord of the 2x4 Horodecki state over p
    FigHorodecki {
        /// Grid resolution: p = i/steps for i = 0..=steps
        #[arg(long, default_value_t = 20)]
        steps: usize,

        /// Explicit comma-separated p values (overrides --steps)
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,

        #[arg(short, long)]
        out: Option<PathBuf>,
    },

    /// DQC1 measures over the control-qubit polarization
    FigDqc1 {
        #[arg(long, default_value_t = 5)]
        n: usize,

        /// Grid resolution: alpha = i/steps for i = 0..=steps
        #[arg(long, default_value_t = 10)]
        steps: usize,

        /// Haar seeds (comma-separated)
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        seeds: Vec<u64>,

        /// One row per (alpha, seed) instead of seed averages
        #[arg(long)]
        per_seed: bool,

        #[arg(short, long)]
        out: Option<PathBuf>,
    },

    /// Locking-state MID and LNU bound for (d, m) pairs
    LockingScan {
        /// Pairs written as DxM, comma-separated
        #[arg(long, value_delimiter = ',', default_value = "2x2,2x3,3x2,3x3,3x4,4x2")]
        pairs: Vec<String>,

        /// Fail with exit code 3 if any pair is unsupported
        #[arg(long)]
        strict: bool,

        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenKind {
    /// Two-qubit isotropic state
    Isotropic {
        #[arg(long)]
        z: f64,
    },
    /// One-clean-qubit state with a Haar unitary drawn from --seed
    Dqc1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
    },
    /// 2x4 bound entangled state
    Horodecki {
        #[arg(long)]
        p: f64,
    },
    /// Locking state from m mutually unbiased bases of dimension d
    Locking {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
    },
    /// Separable two-qubit state with zero discord
    ZeroDiscord {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Random density matrix of the given rank, drawn from --seed
    Random {
        #[arg(long)]
        dim_a: usize,
        #[arg(long)]
        dim_b: usize,
        /// Defaults to full rank
        #[arg(long)]
        rank: Option<usize>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Lnu,
    Discord,
    Mid,
    MutualInfo,
    Purity,
    Ppt,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    A,
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

fn thread_count(flag: Option<usize>) -> Option<usize> {
    std::env::var("NONCLASS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .or(flag)
        .filter(|&n| n > 0)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = thread_count(cli.global.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(anyhow::Error::from)?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Gen { kind, out } => commands::generate(g, &kind, out.as_deref()),
        Command::Measure {
            input,
            measure,
            side,
        } => commands::measure(g, &input, measure, side.into()),
        Command::FigHorodecki { steps, values, out } => {
            let grid = values.unwrap_or_else(|| commands::unit_grid(steps));
            commands::fig_horodecki(g, &grid, out.as_deref())
        }
        Command::FigDqc1 {
            n,
            steps,
            seeds,
            per_seed,
            out,
        } => commands::fig_dqc1(
            g,
            n,
            &commands::unit_grid(steps),
            &seeds,
            per_seed,
            out.as_deref(),
        ),
        Command::LockingScan { pairs, strict, out } => {
            commands::locking_scan(&pairs, strict, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
