//! `su2ym`: exact identity checks, Painlevé balances, spectral curves and
//! trajectory diagnostics for the 4D and 5D systems.

mod cli;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli::commands::{self, Outcome};
use cli::config::{Flags, RunConfig};
use su2ym::Error;

#[derive(Parser)]
#[command(name = "su2ym", version, about = "Integrability checks for the reduced SU(2) Yang-Mills systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Exact Poisson, conservation, morphism and homogeneity identities.
    Verify,
    /// Laurent-Puiseux balance of the chosen system and branch.
    Balance,
    /// Branch points and genus of a curve, for given or random parameters.
    Curves,
    /// Integrate a trajectory; CSV to --csv, invariant drift as JSON.
    Simulate,
    /// Separation coordinates and the sextic identity along a 4d trajectory.
    Separate,
    /// Abel-map linearization along a 4d trajectory.
    Quadrature,
    /// Every check, exact and numerical, in one report.
    Report,
}

/// Exit status 2 is for input the tool cannot work with, 1 for a failed check.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::Parse(_)
        | Error::MissingVariable(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> su2ym::Result<Outcome> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    let out = match cli.command {
        Command::Verify => commands::verify(&cfg),
        Command::Balance => commands::balance(&cfg),
        Command::Curves => commands::curves(&cfg),
        Command::Simulate => commands::simulate(&cfg),
        Command::Separate => commands::separate(&cfg),
        Command::Quadrature => commands::quadrature(&cfg),
        Command::Report => commands::full_report(&cfg),
    }?;
    match &cfg.out {
        Some(p) => commands::write_atomic(p, out.json.as_bytes())?,
        None => std::io::stdout().lock().write_all(out.json.as_bytes())?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) if out.ok => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("su2ym: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("su2ym: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
