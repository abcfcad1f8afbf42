use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use linham_cli::error::EXIT_INPUT;
use linham_cli::{run, Command, Options};

/// Integrability certificates for linear non-autonomous Hamiltonian systems.
#[derive(Debug, Parser)]
#[command(name = "linham", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// System description (JSON); repeat for batch runs
    #[arg(long = "input", short = 'i', global = true)]
    inputs: Vec<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Seed for the randomized independence checks
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Worker threads for batch runs (0 = one per core)
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,

    /// Tolerance for numeric checks
    #[arg(long, default_value_t = 1e-8, global = true)]
    tolerance: f64,

    /// Leave timing fields out of the report
    #[arg(long, global = true)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        inputs: cli.inputs,
        seed: cli.seed,
        jobs: cli.jobs,
        tolerance: cli.tolerance,
        timing: !cli.no_timing,
    };
    let report = run(cli.command, &opts);
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    let written = match &cli.output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("linham: {msg}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    for entry in &report.results {
        if let Some(err) = &entry.error {
            eprintln!("linham: {}: {err}", entry.inputs.join(", "));
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
