use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fluidcat::commands::DEFAULT_SEED;
use fluidcat::{run, CliError, Command, Format, RunConfig};

/// Thick points, towers and tower bundles over finite information spaces.
#[derive(Debug, Parser)]
#[command(name = "fluidcat", version)]
struct Cli {
    command: Command,
    /// Space document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Proximity cutoff ε.
    #[arg(long)]
    epsilon: f64,
    /// Thickening level P.
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Decay rate of the wave function.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Number of towers merged per bundle object.
    #[arg(long, default_value_t = 1)]
    arity: usize,
    /// Restrict per-core reports to one atom.
    #[arg(long)]
    core: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        input: cli.input,
        epsilon: cli.epsilon,
        levels: cli.levels,
        lambda: cli.lambda,
        arity: cli.arity,
        core: cli.core,
        seed: cli.seed,
        output: cli.output,
        format: cli.format,
    };
    match run(cli.command, &cfg).and_then(|outcome| emit(&cfg, outcome)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fluidcat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(cfg: &RunConfig, outcome: fluidcat::Outcome) -> Result<u8, CliError> {
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &outcome.text).map_err(|source| CliError::Write { path: path.clone(), source })?
        }
        None => print!("{}", outcome.text),
    }
    Ok(outcome.exit_code as u8)
}
