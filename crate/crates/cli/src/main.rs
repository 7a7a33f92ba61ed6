use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use secrecy_sor_cli::commands::{self, RunOptions};
use secrecy_sor_cli::manifest::Manifest;
use secrecy_sor_cli::reproduce::{self, Figure, ReproduceOptions};
use secrecy_sor_cli::schemes::Resolution;
use secrecy_sor_cli::table::Table;
use secrecy_sor_cli::CliError;
use secrecy_sor_core::asymptotic::DEFAULT_INTERVALS_PER_LOBE;

/// Secrecy outage regions and probabilities of a large-array transmitter
/// with artificial-noise jamming.
#[derive(Debug, Parser)]
#[command(name = "secrecy-sor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output CSV; overrides the manifest's `output_path`. Stdout if neither.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed of Monte Carlo runs; overrides the manifest.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Step of jamming-fraction grids.
    #[arg(long, global = true)]
    phi_step: Option<f64>,
    /// Angle grid intervals per lobe (sor-map).
    #[arg(long, global = true, default_value_t = DEFAULT_INTERVALS_PER_LOBE)]
    grid: usize,
    /// Worker threads; all cores when unset.
    #[arg(long, global = true, env = "SECRECY_SOR_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regenerate one of the reference figures as CSV.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Emit fig2 for both path-loss exponents 3 and 2.
        #[arg(long)]
        both_alpha: bool,
    },
    /// Boundary of the secrecy outage region, sampled in angle.
    SorMap(ManifestArg),
    /// Secrecy outage probability of the manifest's scheme.
    Sop(ManifestArg),
    /// Optimized jamming allocation with its area and SOP.
    Optimize(ManifestArg),
    /// Monte Carlo estimate against the large-array formulas.
    McValidate(ManifestArg),
}

#[derive(Debug, Args)]
struct ManifestArg {
    #[arg(long)]
    manifest: PathBuf,
}

fn run(cli: Cli) -> Result<(String, Table), CliError> {
    let c = &cli.common;
    if let Some(s) = c.phi_step {
        if !(s > 0.0 && s < 1.0) {
            return Err(secrecy_sor_cli::ManifestError::new("--phi-step", "must lie in (0, 1)").into());
        }
    }
    if c.grid < 2 {
        return Err(secrecy_sor_cli::ManifestError::new("--grid", "needs at least 2 intervals per lobe").into());
    }
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let opts = RunOptions { seed: c.seed, res: Resolution { phi_step: c.phi_step }, per_lobe: c.grid };
    let (name, table, manifest_out) = match &cli.command {
        Command::Reproduce { figure, both_alpha } => {
            let ropts = ReproduceOptions { phi_step: c.phi_step, both_alpha: *both_alpha };
            let name = format!("reproduce {}", format!("{figure:?}").to_lowercase());
            (name, reproduce::run(*figure, ropts)?, None)
        }
        Command::SorMap(a) | Command::Sop(a) | Command::Optimize(a) | Command::McValidate(a) => {
            let m = Manifest::load(&a.manifest)?;
            let (name, table) = match &cli.command {
                Command::SorMap(_) => ("sor-map", commands::sor_map(&m, opts)?),
                Command::Sop(_) => ("sop", commands::sop(&m, opts)?),
                Command::Optimize(_) => ("optimize", commands::optimize(&m, opts)?),
                _ => ("mc-validate", commands::mc_validate(&m, opts)?),
            };
            (name.to_owned(), table, m.output_path.clone())
        }
    };
    table.emit(c.out.as_deref().or(manifest_out.as_deref()))?;
    Ok((name, table))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok((name, table)) => {
            eprintln!(
                "secrecy-sor {name}: {} rows, {} with warnings, {:.2} s",
                table.rows().len(),
                table.warnings(),
                start.elapsed().as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
