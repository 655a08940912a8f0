use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use f2_ergodic::cli::{exit_code, run, Command, ExperimentConfig, EXIT_CONFIG_INVALID, OUT_ENV};

/// Simulation and verification runs for spherical averages on F₂-systems.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// verify-finite, verify-chain, axioms, build-tower, survey or calibrate.
    command: String,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to $F2_ERGODIC_OUT, then ./out.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let setup = || -> f2_ergodic::Result<(Command, ExperimentConfig)> {
        let command: Command = args.command.parse()?;
        let mut config = ExperimentConfig::load(&args.config)?;
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        Ok((command, config))
    };
    let (command, config) = match setup() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG_INVALID);
        }
    };
    let out = args
        .out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let result = run(command, &config, &out);
    match &result {
        Ok(o) => {
            println!("{} {}", o.command, if o.pass { "PASS" } else { "FAIL" });
            for f in &o.files {
                println!("  {}", f.display());
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result))
}
