// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

//! `epmat`: P-matrix, EP-matrix, LCP and consensus checks on matrix files.
//!
//! Exit status is 0 whenever a report is produced, whatever the verdict;
//! 2 signals unreadable or invalid input and 3 a capacity limit.

mod commands;
mod csv;
mod docs;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Outcome;
use crate::error::CliError;
use crate::report::{Report, Timing, Tolerances};

#[derive(Parser)]
#[command(name = "epmat", version, about = "P-matrix and exponential-P-matrix analysis")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Positivity tolerance for minors (overrides EPMAT_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// P, P0, Q, sign-symmetry and eigenvalue-wedge checks.
    Pcheck {
        matrix: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Classify exp(A t) for all t: EP, not EP, or undecided.
    Epcheck {
        matrix: PathBuf,
        /// Points per log and linear half of the falsifier grid.
        #[arg(long)]
        grid: Option<usize>,
        /// Horizon of the falsifier grid.
        #[arg(long)]
        t_max: Option<f64>,
        /// Skip the grid falsifier.
        #[arg(long)]
        certificates_only: bool,
        /// Write principal-minor curves to PREFIX_k<k>.csv.
        #[arg(long, value_name = "PREFIX")]
        minor_csv: Option<PathBuf>,
        #[command(flatten)]
        search: Search,
    },
    /// Enumerate all solutions of LCP(q, M).
    Lcp {
        matrix: PathBuf,
        /// Vector document holding q.
        #[arg(long, required_unless_present = "random_q")]
        q: Option<PathBuf>,
        /// Sample this many standard-normal q and report multiplicities.
        #[arg(long, value_name = "N")]
        random_q: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rewrite a matrix document with every entry at 17 significant digits.
    Normalize { matrix: PathBuf },
    /// Audit sign non-reversal of consensus dynamics on a weighted digraph.
    Consensus {
        scenario: PathBuf,
        /// Override the scenario grid horizon.
        #[arg(long)]
        t_max: Option<f64>,
        /// Override the number of grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Faces tried when searching for a sign-reversing initial vector.
        #[arg(long, default_value_t = 10_000)]
        x0_search_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write trajectories (t, then x_1..x_n per initial vector).
        #[arg(long, value_name = "PATH")]
        trajectory_csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Search {
    /// Faces tried by the sign-reversal search.
    #[arg(long, default_value_t = 10_000)]
    sign_reversal_trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(cli: Cli, argv: Vec<String>) -> Result<String, CliError> {
    let start = Instant::now();
    let env = std::env::var("EPMAT_TOL").ok();
    let (tol, source) = report::resolve_tol(cli.tol, env.as_deref())?;
    let out: Outcome = match cli.command {
        Command::Normalize { matrix } => return commands::normalize(&matrix),
        Command::Pcheck { matrix, search } => commands::pcheck(&commands::PCheckArgs {
            matrix,
            tol,
            sign_reversal_trials: search.sign_reversal_trials,
            seed: search.seed,
        })?,
        Command::Epcheck { matrix, grid, t_max, certificates_only, minor_csv, search } => {
            commands::epcheck(&commands::EpCheckArgs {
                matrix,
                tol,
                grid,
                t_max,
                certificates_only,
                sign_reversal_trials: search.sign_reversal_trials,
                seed: search.seed,
                minor_csv,
            })?
        }
        Command::Lcp { matrix, q, random_q, seed } => commands::lcp(&commands::LcpArgs { matrix, q, random_q, seed })?,
        Command::Consensus { scenario, t_max, grid, x0_search_trials, seed, trajectory_csv } => {
            commands::consensus(&commands::ConsensusArgs {
                scenario,
                tol,
                t_max,
                grid,
                x0_search_trials,
                seed,
                trajectory_csv,
            })?
        }
    };
    if cli.format == Format::Human {
        return Ok(out.human);
    }
    let inputs: Vec<&str> = out.inputs.iter().map(String::as_str).collect();
    let r = Report {
        command: argv,
        input_digest: report::digest(&inputs),
        tool_version: report::TOOL_VERSION,
        tolerances: Tolerances { tol, source, zero_tol: epmat_core::EpOptions::default().zero_tol },
        verdicts: out.verdicts,
        timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 },
    };
    Ok(r.to_json())
}

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(first) = argv.first_mut() {
        *first = "epmat".into();
    }
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("epmat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
