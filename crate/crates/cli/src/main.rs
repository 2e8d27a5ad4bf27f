//! `numphase`: command-line front end for the number-phase toolkit.

mod commands;
mod config;
mod error;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Output;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "numphase", version, about = "Number-phase measurement computations at finite truncation")]
struct Cli {
    /// JSON settings file; flags take precedence over its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Truncated canonical phase effect of a union of arcs.
    PhaseEffect(commands::PhaseEffectArgs),
    /// Ground state of a weighted or oscillator Hamiltonian by finite sections.
    Ground(commands::GroundArgs),
    /// Joint-predictability bound for a phase arc set and a number set.
    Lenard(commands::LenardArgs),
    /// Decay of the largest vacuum multiple below truncated phase effects.
    Complementarity(commands::ComplementarityArgs),
    /// Wasserstein-2 distance on the circle or the integers.
    Wasserstein(commands::WassersteinArgs),
    /// Boundary of the error region, or fock/torus comparison with --evidence.
    MuBoundary(commands::MuBoundaryArgs),
    /// Margin errors of a covariant approximator against the oscillator bound.
    ErrorSum(commands::ErrorSumArgs),
    /// Embed a kernel joint observable into the angle-integer picture.
    Embed(commands::EmbedArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::PhaseEffect(_) => "phase-effect",
            Command::Ground(_) => "ground",
            Command::Lenard(_) => "lenard",
            Command::Complementarity(_) => "complementarity",
            Command::Wasserstein(_) => "wasserstein",
            Command::MuBoundary(_) => "mu-boundary",
            Command::ErrorSum(_) => "error-sum",
            Command::Embed(_) => "embed",
        }
    }
}

fn run(cli: Cli) -> CliResult<Output> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &cfg.command {
        if name != cli.command.name() {
            return Err(CliError::Validation(format!(
                "config file is for '{name}', not '{}'",
                cli.command.name()
            )));
        }
    }
    match cli.command {
        Command::PhaseEffect(a) => commands::phase_effect_cmd(a, &cfg),
        Command::Ground(a) => commands::ground_cmd(a, &cfg),
        Command::Lenard(a) => commands::lenard_cmd(a, &cfg),
        Command::Complementarity(a) => commands::complementarity_cmd(a, &cfg),
        Command::Wasserstein(a) => commands::wasserstein_cmd(a, &cfg),
        Command::MuBoundary(a) => commands::mu_boundary_cmd(a, &cfg),
        Command::ErrorSum(a) => commands::error_sum_cmd(a, &cfg),
        Command::Embed(a) => commands::embed_cmd(a, &cfg),
    }
}

/// With `--out` the artifact goes to the file and the summary to stdout;
/// otherwise the artifact goes to stdout and the summary to stderr.
fn emit(o: &Output) -> CliResult<()> {
    match &o.out {
        Some(path) => {
            std::fs::write(path, &o.body).map_err(|e| CliError::io(path, e))?;
            print!("{}", o.summary);
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(o.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))?;
            eprint!("{}", o.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|o| {
        emit(&o)?;
        o.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
