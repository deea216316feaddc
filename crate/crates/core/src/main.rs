use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polydense::experiment::{run_approx, run_certify, LoadedConfig, RunSummary, EXIT_CONFIG, EXIT_IO};

#[derive(Parser)]
#[command(name = "polydense", version, about = "Weighted L2 polynomial approximation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write outputs here instead of the config's output_dir.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the density hypotheses for the configured weight (certify.json).
    Certify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Build the orthonormal basis and project the test functions
    /// (basis.json, projection_<name>.csv, report.json).
    Approx {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config_path = match &cli.command {
        Command::Certify { config } | Command::Approx { config } => config,
    };
    let loaded = match LoadedConfig::load(config_path) {
        Ok(l) => l,
        Err(e) => return fail(EXIT_CONFIG, &format!("config error: {e}")),
    };
    let weight = match loaded.weight() {
        Ok(w) => w,
        Err(e) => return fail(EXIT_CONFIG, &format!("config error: {e}")),
    };
    let out_dir = loaded.output_dir(cli.output_dir.as_deref());

    let result = match cli.command {
        Command::Certify { .. } => run_certify(&loaded, &weight, &out_dir),
        Command::Approx { .. } => run_approx(&loaded, weight, &out_dir),
    };
    match result {
        Ok(RunSummary { exit_code, lines }) => {
            if !cli.quiet {
                for line in lines {
                    println!("{line}");
                }
            }
            ExitCode::from(exit_code as u8)
        }
        Err(e) => fail(EXIT_IO, &format!("cannot write results to {}: {e}", out_dir.display())),
    }
}

fn fail(code: i32, message: &str) -> ExitCode {
    eprintln!("{message}");
    ExitCode::from(code as u8)
}
