//! `lcif`: exact local constants from the command line.
//!
//! Exit status: 0 when every checked identity holds, 1 on a violated
//! identity, 2 on usage or configuration errors.

mod doubling;
mod error;
mod gamma;
mod io;
mod normalizer;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(
    name = "lcif",
    version,
    about = "Exact gamma factors, normalizing factors and doubling zeta integrals over Q_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tate gamma and epsilon factors of a character.
    Gamma(gamma::GammaArgs),
    /// Table of normalizing factors as CSV.
    Normalizer(normalizer::NormalizerArgs),
    /// Gamma factor of the GL(1) doubling integral.
    Doubling(doubling::DoublingArgs),
    /// Run a verification suite over a grid of characters.
    Verify(verify::VerifyArgs),
}

/// Whether all identities checked by a command held.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("LCIF_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::Usage(format!("LCIF_THREADS={v:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<Outcome> {
    init_threads()?;
    match cli.command {
        Command::Gamma(a) => gamma::run(&a),
        Command::Normalizer(a) => normalizer::run(&a),
        Command::Doubling(a) => doubling::run(&a),
        Command::Verify(a) => verify::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lcif: {e}");
            ExitCode::from(2)
        }
    }
}
