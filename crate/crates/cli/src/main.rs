use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unibound::{exit, prepare, run, RunOptions};

#[derive(Parser)]
#[command(name = "unibound", version, about = "Uniform deviation bounds for smooth statistics: experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; affects speed only.
        #[arg(long)]
        workers: Option<usize>,
        /// Permit numerically estimated L, M in bound assembly.
        #[arg(long)]
        override_numeric_constants: bool,
    },
    /// Check a config without running it.
    Validate {
        config: PathBuf,
        #[arg(long)]
        override_numeric_constants: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, seed, out, workers, override_numeric_constants } => {
            let opts = RunOptions { seed, out, workers, override_numeric: override_numeric_constants };
            match run(&config, &opts) {
                Ok(report) => {
                    for line in &report.summary {
                        println!("{line}");
                    }
                    for check in &report.record.checks {
                        let verdict = if check.passed { "pass" } else { "FAIL" };
                        println!("check {}: {verdict} ({})", check.name, check.detail);
                    }
                    println!("wrote {} and {}", report.files.record.display(), report.files.table.display());
                    report.exit_code()
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Validate { config, override_numeric_constants } => {
            let opts = RunOptions { override_numeric: override_numeric_constants, ..RunOptions::default() };
            match prepare(&config, &opts) {
                Ok(_) => {
                    println!("valid");
                    exit::OK
                }
                Err(e) => {
                    eprintln!("{e}");
                    e.exit_code()
                }
            }
        }
    };
    ExitCode::from(code)
}
