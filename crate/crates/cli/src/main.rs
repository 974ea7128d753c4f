use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tmlab::config::{exit_code, CliError, ExperimentConfig};
use tmlab::runner::run_subcommand;

/// Experiments with rational orthogonal systems on the unit disk.
///
/// Every subcommand reads one JSON config and writes a CSV result table
/// plus a JSON run manifest into the configured output directory. A run is
/// fully determined by its config; rerunning reproduces the outputs byte
/// for byte. Exit codes: 0 success, 2 config error, 3 resolution error,
/// 4 numerical-gate failure.
#[derive(Parser)]
#[command(name = "tmlab", version)]
struct Cli {
    /// Run the fast invariant suite and exit.
    #[arg(long, global = true)]
    self_check: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate basis function values on the boundary.
    BasisEval(ConfigArg),
    /// Gram matrix of the leading basis functions (orthonormality gate).
    Gram(ConfigArg),
    /// Boundary, square-function and kernel-weighted norms over a corpus.
    Norms(ConfigArg),
    /// Sign-flip norm ratios over a corpus.
    Scramble(ConfigArg),
    /// Power-basis sign scrambles along a degree ladder.
    Counterexample(ConfigArg),
    /// Two-sided boundary bound scan per dyadic level.
    LemmaBounds(ConfigArg),
    /// Moment-equivalence ratios for random coefficient sequences.
    Khintchine(ConfigArg),
    /// Boundary-gap partial sums over complete levels.
    Nonsep(ConfigArg),
}

#[derive(clap::Args)]
struct ConfigArg {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::BasisEval(_) => "basis-eval",
            Command::Gram(_) => "gram",
            Command::Norms(_) => "norms",
            Command::Scramble(_) => "scramble",
            Command::Counterexample(_) => "counterexample",
            Command::LemmaBounds(_) => "lemma-bounds",
            Command::Khintchine(_) => "khintchine",
            Command::Nonsep(_) => "nonsep",
        }
    }

    fn config_path(&self) -> &PathBuf {
        match self {
            Command::BasisEval(a)
            | Command::Gram(a)
            | Command::Norms(a)
            | Command::Scramble(a)
            | Command::Counterexample(a)
            | Command::LemmaBounds(a)
            | Command::Khintchine(a)
            | Command::Nonsep(a) => &a.config,
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("TMLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.self_check {
        return if tmlab::selfcheck::self_check() {
            Ok(())
        } else {
            Err(CliError::gate("self-check failed"))
        };
    }
    let Some(command) = cli.command else {
        return Err(CliError::config(
            "nothing to do: pass a subcommand or --self-check",
        ));
    };
    let cfg = ExperimentConfig::load(command.config_path())?;
    let artifacts = run_subcommand(command.name(), &cfg)?;
    println!("wrote {}", artifacts.csv_path.display());
    println!("wrote {}", artifacts.manifest_path.display());
    if let Some(gate) = artifacts.gate_failure {
        return Err(CliError::gate(gate));
    }
    Ok(())
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit_code::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
