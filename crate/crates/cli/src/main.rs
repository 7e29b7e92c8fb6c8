//! Command-line front end: generation, verification, and standalone
//! invocations of the core operations, with reproducible file outputs.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 inconclusive (search budget
//! exhausted), 3 usage or input error.

mod battery;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cocfg::group::DEFAULT_MAX_P;

#[derive(Parser)]
#[command(name = "cocfg", version, about = "Exact toolkit for coherent configurations and Schur rings", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Parameters shared by the scheme-producing commands.
#[derive(Args, Clone)]
pub struct SchemeArgs {
    /// Prime parameter p ≥ 5 of the degree-4p² family.
    #[arg(long)]
    pub p: Option<u64>,
    /// Fusion level: 1, 2, 3 (one coset kept whole), 12, 13, 23 (two), or 0 (all three).
    #[arg(long)]
    pub fusion: Option<String>,
    /// Accept p beyond the default maximum of 13.
    #[arg(long, default_value_t = false)]
    pub override_max_p: bool,
    /// Node budget for backtracking searches.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write group, partition, scheme, and tensor files for a prime p.
    Generate {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the verification battery and write a machine-readable report.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Run a single named stage (see `verify --p 5 --lemma list`).
        #[arg(long)]
        lemma: Option<String>,
        /// Directory for report.json; printed to stdout regardless.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the automorphism group of a scheme.
    Aut {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Read the scheme from a JSON file instead of constructing it.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        /// Output file for the group JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the intersection-number tensor of a scheme.
    Tensor {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilize an arbitrary color matrix and report the rank delta.
    Wl {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome categories mapped to exit codes.
pub enum Outcome {
    Pass,
    VerifyFailure,
    Inconclusive,
    UsageError(String),
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::VerifyFailure => 1,
            Outcome::Inconclusive => 2,
            Outcome::UsageError(_) => 3,
        }
    }
}

pub struct RunConfig {
    pub p: u64,
    pub fusion: Option<cocfg::FusionLevel>,
    pub budget: Option<u64>,
    pub max_p: u64,
}

impl RunConfig {
    fn from_args(args: &SchemeArgs) -> Result<Self, String> {
        let p = args.p.ok_or("--p is required for this command")?;
        let max_p = if args.override_max_p { p.max(DEFAULT_MAX_P) } else { DEFAULT_MAX_P };
        cocfg::group::check_prime_parameter(p, max_p).map_err(|e| e.to_string())?;
        let fusion = match &args.fusion {
            None => None,
            Some(tok) => Some(tok.parse().map_err(|e| format!("{e}"))?),
        };
        Ok(RunConfig {
            p,
            fusion,
            budget: args.budget,
            max_p,
        })
    }

    pub fn limits(&self) -> cocfg::SearchLimits {
        match self.budget {
            Some(n) => cocfg::SearchLimits::with_budget(n),
            None => cocfg::SearchLimits::default(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(3);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Generate { scheme, out } => commands::generate(&scheme, &out),
        Command::Verify { scheme, lemma, out } => battery::verify(&scheme, lemma.as_deref(), out.as_deref()),
        Command::Aut { scheme, input, out } => {
            commands::aut(&scheme, input.as_deref(), out.as_deref())
        }
        Command::Tensor { scheme, input, out } => {
            commands::tensor(&scheme, input.as_deref(), out.as_deref())
        }
        Command::Wl { input, out } => commands::wl(&input, out.as_deref()),
    };
    if let Outcome::UsageError(msg) = &outcome {
        eprintln!("error: {msg}");
    }
    ExitCode::from(outcome.code())
}
