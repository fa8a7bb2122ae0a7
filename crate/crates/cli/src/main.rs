use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rqb_cli::{Config, Overrides};

#[derive(Parser)]
#[command(name = "rqb", version, about = "Random quantum battery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV tables and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides the config `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List missing, unknown and invalid keys without running.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            out,
            jobs,
        } => match rqb_cli::run_path(&config, &Overrides { seed, out, jobs }) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Validate { config } => match Config::from_path(&config) {
            Ok(cfg) => {
                let diagnostics = cfg.validate();
                if diagnostics.is_empty() {
                    println!("ok");
                    return ExitCode::SUCCESS;
                }
                for d in &diagnostics {
                    println!("{d}");
                }
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
