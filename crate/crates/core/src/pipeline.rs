//! The three commands of the `canphase` tool: build kernel tables, run a
//! simulated experiment, and tabulate exact reference values.
//!
//! Every result file is a pure function of the configuration; the only
//! wall-clock value written anywhere is `metadata.json`'s `created_unix`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::estimator::output::{moments_csv, phase_stats_csv, MomentRecord};
use crate::estimator::{
    phase_stats, phase_stats_or_undefined, q_moments, sample_moments, with_negative_orders, KernelSet, MomentEstimate,
    PhaseStats,
};
use crate::kernels::cache::{load_or_build, CacheStatus};
use crate::kernels::eval::kernel_classical;
use crate::kernels::table::verify_integral_equation;
use crate::quantum_state::{canonical_phase_pdf, exact_moments, mean_photon, phase_grid, DensityMatrix};
use crate::simulator::{sample_double_homodyne, PhaseSchedule, QuadratureModel, RejectionStats};

/// Largest n checked against the integral equation by `cmd_kernels`.
pub const RESIDUAL_N_MAX: usize = 30;

/// Loads or builds tables for k = 1..=k_max from the configured cache.
pub fn load_kernel_set(config: &ExperimentConfig) -> Result<(KernelSet, Vec<CacheStatus>)> {
    let mut tables = Vec::with_capacity(config.k_max);
    let mut status = Vec::with_capacity(config.k_max);
    for k in 1..=config.k_max as i32 {
        let (t, s) = load_or_build(&config.cache_dir, k, &config.kernels)?;
        tables.push(t);
        status.push(s);
    }
    Ok((KernelSet::new(tables)?, status))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelResidualSummary {
    pub k: usize,
    pub n_max: usize,
    pub max_residual: f64,
    pub worst_n: usize,
    pub asymptote_constant: f64,
}

/// Builds (or loads) the tables and writes `kernel_k{k}.csv` with columns
/// `x,K,K_classical` plus `residuals.csv` (`k,n,residual`).
pub fn cmd_kernels(config: &ExperimentConfig) -> Result<Vec<KernelResidualSummary>> {
    config.validate()?;
    let (set, _) = load_kernel_set(config)?;
    let out = &config.output_dir;
    let mut residual_csv = String::from("k,n,residual\n");
    let mut summary = Vec::new();
    for table in set.tables() {
        let k = table.order() as usize;
        let mut csv = String::from("x,K,K_classical\n");
        for (x, v) in table.x_grid().into_iter().zip(table.values()) {
            let classical = kernel_classical(table.k(), x, table.asymptote_constant()).unwrap_or(f64::NAN);
            writeln!(csv, "{x},{v},{classical}").expect("writing to a String");
        }
        write(out, &format!("kernel_k{k}.csv"), &csv)?;

        let x_c = table.crossover_x();
        let n_max = (((x_c * x_c - 1.0) / 2.0).floor() as usize)
            .saturating_sub(k)
            .min(RESIDUAL_N_MAX);
        let residuals = verify_integral_equation(table, n_max)?;
        for (n, r) in residuals.iter().enumerate() {
            writeln!(residual_csv, "{k},{n},{r}").expect("writing to a String");
        }
        let (worst_n, max_residual) =
            residuals
                .iter()
                .copied()
                .enumerate()
                .fold((0, 0.0), |best, (n, r)| if r > best.1 { (n, r) } else { best });
        summary.push(KernelResidualSummary {
            k,
            n_max,
            max_residual,
            worst_n,
            asymptote_constant: table.asymptote_constant(),
        });
    }
    write(out, "residuals.csv", &residual_csv)?;
    write(out, "kernels_summary.json", &serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

/// Everything `cmd_run` computes.
#[derive(Debug, Clone, Serialize)]
pub struct RunResults {
    pub state_label: String,
    pub mean_photon: f64,
    pub homodyne: Vec<MomentEstimate>,
    pub q_function: Vec<MomentEstimate>,
    pub exact: Vec<MomentEstimate>,
    pub homodyne_phase: PhaseStats,
    pub q_phase: PhaseStats,
    pub exact_phase: PhaseStats,
    pub schedule: PhaseSchedule,
    pub rejection: RejectionStats,
}

fn exact_estimates(rho: &DensityMatrix, k_max: usize) -> Result<Vec<MomentEstimate>> {
    (1..=k_max as i32)
        .map(|k| {
            Ok(MomentEstimate {
                k,
                value: exact_moments(rho, k)?,
                stderr_re: 0.0,
                stderr_im: 0.0,
                cov_re_im: 0.0,
                n_events_used: 0,
            })
        })
        .collect()
}

/// Simulates one homodyne and one double-homodyne experiment with the same
/// event budget and estimates Ψ_k from both.
pub fn run_experiment(config: &ExperimentConfig, kernels: &KernelSet) -> Result<RunResults> {
    config.validate()?;
    let rho = config.state.build(config.fock_dim)?;
    let label = config.state.label();
    let model = QuadratureModel::new(&rho, config.n_theta, config.grids.x_points)?;
    let schedule = model.allocate(config.total_events, config.allocation)?;
    let data = model.sample(&schedule, config.seed, &label)?;
    let homodyne = sample_moments(&data, kernels, config.k_max)?;
    let double = sample_double_homodyne(&rho, config.total_events, config.seed, &label)?;
    let q_function = q_moments(&double, config.k_max)?;
    let exact = exact_estimates(&rho, config.k_max)?;
    Ok(RunResults {
        state_label: label,
        mean_photon: mean_photon(&rho),
        homodyne_phase: phase_stats(&homodyne[0])?,
        q_phase: phase_stats(&q_function[0])?,
        exact_phase: phase_stats_or_undefined(&exact[0])?,
        homodyne,
        q_function,
        exact,
        schedule,
        rejection: double.stats,
    })
}

#[derive(Serialize)]
struct ResultsMirror<'a> {
    state_label: &'a str,
    mean_photon: f64,
    homodyne: Vec<MomentRecord>,
    q_function: Vec<MomentRecord>,
    exact: Vec<MomentRecord>,
    phase_stats: [(&'a str, PhaseStats); 3],
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool_version: &'a str,
    config_hash: String,
    seed: u64,
    state_label: &'a str,
    allocation: crate::simulator::AllocationStrategy,
    thetas: &'a [f64],
    counts: &'a [usize],
    rejection: RejectionStats,
    created_unix: u64,
}

fn bars_csv(sets: &[(&str, &[MomentEstimate])]) -> String {
    let mut csv = String::from("method,k,re,im,err_re,err_im\n");
    for (method, estimates) in sets {
        for e in with_negative_orders(estimates) {
            writeln!(
                csv,
                "{method},{},{},{},{},{}",
                e.k, e.value.re, e.value.im, e.stderr_re, e.stderr_im
            )
            .expect("writing to a String");
        }
    }
    csv
}

/// Runs the experiment and writes `moments_homodyne.csv`, `moments_q.csv`,
/// `moments_exact.csv`, `phase_stats.csv`, `bars.csv` (k from −k_max to
/// k_max for a bar plot), `results.json` and `metadata.json`.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunResults> {
    config.validate()?;
    let (kernels, _) = load_kernel_set(config)?;
    let results = run_experiment(config, &kernels)?;
    let out = &config.output_dir;
    write(out, "moments_homodyne.csv", &moments_csv(&results.homodyne))?;
    write(out, "moments_q.csv", &moments_csv(&results.q_function))?;
    write(out, "moments_exact.csv", &moments_csv(&results.exact))?;
    let phases = [
        ("homodyne", results.homodyne_phase),
        ("q_function", results.q_phase),
        ("exact", results.exact_phase),
    ];
    write(out, "phase_stats.csv", &phase_stats_csv(&phases))?;
    write(
        out,
        "bars.csv",
        &bars_csv(&[
            ("homodyne", &results.homodyne),
            ("q_function", &results.q_function),
            ("exact", &results.exact),
        ]),
    )?;
    let records = |v: &[MomentEstimate]| v.iter().map(MomentRecord::from).collect::<Vec<_>>();
    let mirror = ResultsMirror {
        state_label: &results.state_label,
        mean_photon: results.mean_photon,
        homodyne: records(&results.homodyne),
        q_function: records(&results.q_function),
        exact: records(&results.exact),
        phase_stats: phases,
    };
    write(out, "results.json", &serde_json::to_string_pretty(&mirror)?)?;
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let metadata = Metadata {
        tool_version: env!("CARGO_PKG_VERSION"),
        config_hash: config.hash()?,
        seed: config.seed,
        state_label: &results.state_label,
        allocation: config.allocation,
        thetas: &results.schedule.thetas,
        counts: &results.schedule.counts,
        rejection: results.rejection,
        created_unix,
    };
    write(out, "metadata.json", &serde_json::to_string_pretty(&metadata)?)?;
    Ok(results)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactResults {
    pub state_label: String,
    pub mean_photon: f64,
    pub moments: Vec<(i32, Complex64)>,
    pub phase: PhaseStats,
}

/// Writes `exact_moments.csv` (`k,re,im,abs,arg`), `phase_density.csv`
/// (`phi,p`, centred on arg Ψ_1) and `exact.json`.
pub fn cmd_exact(config: &ExperimentConfig) -> Result<ExactResults> {
    config.validate()?;
    let rho = config.state.build(config.fock_dim)?;
    let estimates = exact_estimates(&rho, config.k_max)?;
    let moments: Vec<(i32, Complex64)> = estimates.iter().map(|e| (e.k, e.value)).collect();
    let mut csv = String::from("k,re,im,abs,arg\n");
    for (k, v) in &moments {
        writeln!(csv, "{k},{},{},{},{}", v.re, v.im, v.norm(), v.arg()).expect("writing to a String");
    }
    let phase = phase_stats_or_undefined(&estimates[0])?;
    let center = if phase.mean_phase.is_finite() {
        phase.mean_phase
    } else {
        0.0
    };
    let grid = phase_grid(center, config.grids.phase_points);
    let mut density = String::from("phi,p\n");
    for (phi, p) in grid.iter().zip(canonical_phase_pdf(&rho, &grid)) {
        writeln!(density, "{phi},{p}").expect("writing to a String");
    }
    let out = &config.output_dir;
    write(out, "exact_moments.csv", &csv)?;
    write(out, "phase_density.csv", &density)?;
    let results = ExactResults {
        state_label: config.state.label(),
        mean_photon: mean_photon(&rho),
        moments,
        phase,
    };
    write(out, "exact.json", &serde_json::to_string_pretty(&results)?)?;
    Ok(results)
}
