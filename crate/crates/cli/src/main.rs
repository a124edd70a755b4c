use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sbp_cli::{parse_config, run, Status};

/// Runs one solve, sweep or check described by a config file.
#[derive(Parser, Debug)]
#[command(name = "sbp", version, about)]
struct Args {
    /// Run configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// Overrides `run.output_dir`.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Forces a single thread.
    #[arg(long)]
    serial: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(Status::BadConfig as u8);
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(Status::BadConfig as u8);
        }
    };
    if let Some(dir) = args.output {
        config.output_dir = dir;
    }
    let threads = if args.serial { 1 } else { args.threads.max(1) };
    match run(&config, threads) {
        Ok(status) => {
            eprintln!(
                "{}: {:?}, artifacts in {}",
                config.command.name(),
                status,
                config.output_dir.display()
            );
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status as u8)
        }
    }
}
