//! Command-line runner for the field experiments.
//!
//! Each subcommand reads a TOML config; `--seed`, `--replicates` and `--out`
//! override the corresponding config fields. Worker threads follow
//! `RAYON_NUM_THREADS`; outputs do not depend on it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fkg_poisson::config::{ExperimentConfig, ExperimentKind};
use fkg_poisson::experiment::run;
use fkg_poisson::Error;

#[derive(Parser)]
#[command(name = "fkg-poisson", version, about = "Poisson limits of associated lattice fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate sigma(n) and n^d sigma(n) over `n_values`.
    SigmaSweep(RunArgs),
    /// Characteristic-function report over `t_values` x `n_values`.
    Charfn(RunArgs),
    /// Box-count histogram and fit summary.
    CountFit(RunArgs),
    /// Exact and Monte Carlo association check on `sites`.
    FkgCheck(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Master seed; overrides `master_seed`.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Replicate count; overrides `replicates`.
    #[arg(long, value_name = "INT")]
    replicates: Option<u64>,
    /// Output directory; overrides `out_dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn execute(kind: ExperimentKind, args: RunArgs) -> Result<PathBuf, Error> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(r) = args.replicates {
        config.replicates = r;
    }
    let out = args.out.or_else(|| config.out_dir.clone()).ok_or_else(|| Error::InvalidConfig {
        parameter: "out".into(),
        message: "no output directory: pass --out or set out_dir".into(),
    })?;
    run(kind, &config, &out)?;
    Ok(out.join("manifest.json"))
}

fn error_record(e: &Error) -> String {
    serde_json::json!({
        "error": e.kind(),
        "parameter": e.parameter(),
        "message": e.to_string(),
    })
    .to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::SigmaSweep(a) => (ExperimentKind::SigmaSweep, a),
        Command::Charfn(a) => (ExperimentKind::Charfn, a),
        Command::CountFit(a) => (ExperimentKind::CountFit, a),
        Command::FkgCheck(a) => (ExperimentKind::FkgCheck, a),
    };
    match execute(kind, args) {
        Ok(manifest) => {
            println!("{}", manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            // 2: the request itself is wrong; 1: it failed while running
            let invalid = matches!(
                e,
                Error::InvalidConfig { .. }
                    | Error::InvalidSpec(_)
                    | Error::InvalidFunction(_)
                    | Error::InvalidRegion(_)
                    | Error::InvalidWindow(_)
            );
            ExitCode::from(if invalid { 2 } else { 1 })
        }
    }
}
