use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hitpack_core::experiments::{Command, ExperimentConfig, RawConfig};

#[derive(Parser)]
#[command(name = "hitpack", version, about = "Random graph process experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// P(min degree >= k) against exp(-gamma_k).
    Threshold(Common),
    /// P(G in A_k) against exp(-gamma_k).
    Akprob(Common),
    /// A_k membership at the hitting time of min degree k.
    Hitting(Common),
    /// Spectral, mixing, H-property and coupling checks.
    Diagnostics(Common),
    /// Per-trial sprinkling records.
    Sprinkle(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key=value config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `trials` in the config.
    #[arg(long)]
    trials: Option<u64>,
    /// Output CSV; defaults to `out` in the config, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(command: Command, args: &Common) -> Result<(), String> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| format!("{}: {e}", args.config.display()))?;
    let mut raw = RawConfig::parse(&text).map_err(|e| format!("{}: {e}", args.config.display()))?;
    if let Some(seed) = args.seed {
        raw.set("seed", seed.to_string());
    }
    if let Some(trials) = args.trials {
        raw.set("trials", trials.to_string());
    }
    let cfg = ExperimentConfig::from_raw(&raw).map_err(|e| format!("{}: {e}", args.config.display()))?;
    let table = command.run(&cfg).map_err(|e| e.to_string())?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    match args.out.as_ref().or(cfg.out.as_ref()) {
        Some(path) => table.write(path, cfg.json).map_err(|e| format!("{}: {e}", path.display()))?,
        None => {
            print!("{}", table.to_csv());
            if cfg.json {
                print!("{}", table.to_json());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::Threshold(a) => (Command::Threshold, a),
        Cmd::Akprob(a) => (Command::Akprob, a),
        Cmd::Hitting(a) => (Command::Hitting, a),
        Cmd::Diagnostics(a) => (Command::Diagnostics, a),
        Cmd::Sprinkle(a) => (Command::Sprinkle, a),
    };
    match run(command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
