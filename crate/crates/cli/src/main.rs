//! `onion`: hyperdeterminants and onion classes of small state tensors.

mod commands;
mod document;
mod failure;
mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use onion_core::selftest::Level;
use onion_core::Tolerance;

use crate::document::{parse_ensemble, parse_state, AnyState, Mode};
use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Parser, Debug)]
#[command(name = "onion", version, about = "Hyperdeterminants and onion classes of small state tensors")]
struct Cli {
    /// Field for the computation; defaults to the document's encoding.
    #[arg(long, global = true, env = "ONION_MODE", value_enum)]
    mode: Option<Mode>,
    /// Relative zero tolerance in float mode (oracle: residual threshold).
    #[arg(long, global = true, env = "ONION_TOL")]
    tol: Option<f64>,
    #[arg(long, global = true, env = "ONION_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, env = "ONION_RESTARTS", default_value_t = onion_core::oracle::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, global = true, env = "ONION_OUTPUT", value_enum, default_value_t = Output::Json)]
    output: Output,
    /// JSON document to read instead of stdin.
    #[arg(long, global = true, env = "ONION_INPUT")]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Onion class, local ranks and decisive invariants.
    Classify,
    /// Hyperdeterminant value and degree.
    Hyperdet,
    /// Local ranks, hyperdeterminant, entanglement measures, singularity flags.
    Invariants,
    /// Local operators taking a 3-qubit state to its class representative.
    Canonicalize,
    /// Whether a noninvertible local operation can degrade one class to another.
    Reachable {
        from: String,
        to: String,
        #[arg(long, default_value = "qubit3")]
        family: String,
    },
    /// Numerical search for a critical point of the pairing.
    Oracle,
    /// Random state document of the given format.
    Random {
        #[arg(required = true, num_args = 1..)]
        format: Vec<usize>,
    },
    /// Upper-bound ladder class of a mixed-state ensemble.
    Mixed,
    /// Runs the acceptance suite.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let io = |e: std::io::Error| Failure::validation("InputUnreadable", e.to_string());
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(io),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io)?;
            Ok(s)
        }
    }
}

/// The given seed, or a fresh one announced on stderr.
fn seed_or_derive(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        eprintln!("seed: {s}");
        s
    })
}

macro_rules! on_state {
    ($state:expr, $t:ident => $body:expr) => {
        match $state {
            AnyState::Exact($t) => $body,
            AnyState::Float($t) => $body,
        }
    };
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let tol = match cli.tol {
        Some(eps) if !(eps > 0.0 && eps.is_finite()) => {
            return Err(Failure::validation("BadArgument", format!("tolerance must be positive, got {eps}")))
        }
        Some(eps) => Tolerance::new(eps),
        None => Tolerance::default(),
    };
    let state = || -> Result<AnyState, Failure> { Ok(parse_state(&read_input(&cli.input)?)?.convert(cli.mode)) };
    let report = match &cli.command {
        Command::Classify => on_state!(state()?, t => commands::classify_report(&t, tol)?),
        Command::Hyperdet => on_state!(state()?, t => commands::hyperdet_report(&t, tol)?),
        Command::Invariants => on_state!(state()?, t => commands::invariants_report(&t, tol)?),
        Command::Canonicalize => on_state!(state()?, t => commands::canonicalize_report(&t, tol)?),
        Command::Reachable { from, to, family } => commands::reachable_report(family, from, to)?,
        Command::Oracle => {
            let seed = seed_or_derive(cli.seed);
            on_state!(state()?, t => commands::oracle_report(&t, cli.restarts, cli.tol, seed)?)
        }
        Command::Random { format } => {
            let seed = seed_or_derive(cli.seed);
            commands::random_report(format, cli.mode.unwrap_or(Mode::Float), seed)?
        }
        Command::Mixed => commands::mixed_report(parse_ensemble(&read_input(&cli.input)?, cli.mode)?, tol)?,
        Command::Selftest { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = commands::selftest_report(level, cli.seed.unwrap_or(2024));
            let passed = report["passed"].as_bool().unwrap_or(false);
            return Ok((report, passed));
        }
    };
    Ok((report, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, passed)) => {
            match cli.output {
                Output::Json => println!("{report}"),
                Output::Text => print!("{}", render::text(&report)),
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            match cli.output {
                Output::Json => println!("{}", f.to_json()),
                Output::Text => print!("{}", render::text(&f.to_json())),
            }
            ExitCode::from(f.exit_code as u8)
        }
    }
}
