use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tmapprox_cli::config::{OutputFormat, RunConfig};
use tmapprox_cli::{cmd_approx, cmd_sweep, cmd_verify, CliError, Output, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "tmapprox",
    version,
    about = "Weighted best polynomial approximation with rational orthonormal systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults to one pole at i, A=1, B=0, lambda=1
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Seed for randomized check points
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Quadrature relative tolerance
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal polynomial and minimal error for one configuration
    Approx,
    /// Run every identity check against the quadrature oracle
    Verify {
        /// Substitute the printed second-difference form and minimal-error
        /// prefactor; the affected checks are expected to fail
        #[arg(long)]
        printed_forms: bool,
    },
    /// Minimal error for n = 1..n_max
    Sweep,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.quadrature.rel_tol = t;
    }
    match cli.command {
        Command::Approx => cmd_approx(&cfg),
        Command::Verify { printed_forms } => cmd_verify(&cfg, printed_forms),
        Command::Sweep => cmd_sweep(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim_end().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &out.text)
                    .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.exit_code as u8),
                Err(e) => {
                    eprintln!("{}", e.record());
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
