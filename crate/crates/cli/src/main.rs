use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hypskew_cli::run::summary;
use hypskew_cli::{run, CliError, ExperimentConfig, Overrides};

/// Distortion experiments for quasiconformal maps of the hyperbolic disk.
#[derive(Debug, Parser)]
#[command(name = "hypskew", version)]
struct Args {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Seed, overriding the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, overriding the config
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write SVG figures
    #[arg(long)]
    render: bool,
    /// Worker threads (falls back to HYPSKEW_JOBS, then all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))
        .and_then(|text| ExperimentConfig::from_json(&text))
        .and_then(|config| {
            let overrides = Overrides {
                seed: args.seed,
                out: args.out.clone(),
                render: args.render,
                jobs: args.jobs,
            };
            run(config, &overrides)
        });
    match result.and_then(|outcome| {
        print!("{}", summary(&outcome));
        outcome.status()
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypskew: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
