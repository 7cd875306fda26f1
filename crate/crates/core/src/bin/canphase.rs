use std::path::PathBuf;
use std::process::ExitCode;

use canphase::config::ExperimentConfig;
use canphase::pipeline::{cmd_exact, cmd_kernels, cmd_run};
use clap::{Parser, Subcommand};

/// Canonical-phase moments from simulated homodyne data.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML). The built-in reference experiment is used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Kernel table cache directory.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    kmax: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build or load kernel tables, write plot data and integral-equation residuals.
    Kernels,
    /// Simulate both measurements and estimate the moments.
    Run,
    /// Exact moments, mean photon number and phase density.
    Exact,
}

fn run(cli: Cli) -> canphase::Result<()> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::reference(),
    };
    config.seed = cli.seed.unwrap_or(config.seed);
    config.output_dir = cli.out.unwrap_or(config.output_dir);
    config.cache_dir = cli.cache.unwrap_or(config.cache_dir);
    config.k_max = cli.kmax.unwrap_or(config.k_max);
    config.validate()?;

    match cli.command {
        Command::Kernels => {
            for s in cmd_kernels(&config)? {
                println!(
                    "k = {}: max residual {:.2e} over n <= {} (worst n = {})",
                    s.k, s.max_residual, s.n_max, s.worst_n
                );
            }
        }
        Command::Run => {
            let r = cmd_run(&config)?;
            for (name, p) in [
                ("homodyne", r.homodyne_phase),
                ("q-function", r.q_phase),
                ("exact", r.exact_phase),
            ] {
                println!(
                    "{name:>10}: mean phase {:.4} +- {:.4}, delta phi {:.4}",
                    p.mean_phase, p.mean_phase_err, p.delta_phi
                );
            }
        }
        Command::Exact => {
            let r = cmd_exact(&config)?;
            println!("<n> = {:.4}", r.mean_photon);
            for (k, v) in &r.moments {
                println!("Psi_{k} = {:.6} {:+.6}i", v.re, v.im);
            }
        }
    }
    println!("results in {}", config.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
