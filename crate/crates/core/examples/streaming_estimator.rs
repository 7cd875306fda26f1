//! Moments updated while data arrive: events are fed in batches to
//! per-worker accumulators that are merged at read time.
//!
//! ```bash
//! cargo run --release --example streaming_estimator
//! ```

use canphase::estimator::{KernelSet, MomentAccumulator};
use canphase::kernels::{load_or_build, TableParams};
use canphase::quantum_state::{coherent_state, exact_moments, DensityMatrix};
use canphase::simulator::{AllocationStrategy, QuadratureModel, DEFAULT_X_POINTS};
use num_complex::Complex64;

fn main() -> canphase::Result<()> {
    let cache = std::env::temp_dir().join("canphase-kernel-cache");
    let tables = (1..=2)
        .map(|k| load_or_build(&cache, k, &TableParams::default()).map(|(t, _)| t))
        .collect::<Result<_, _>>()?;
    let kernels = KernelSet::new(tables)?;

    let rho = DensityMatrix::from_pure(&coherent_state(Complex64::from_polar(2.0, -1.0), 60)?);
    let model = QuadratureModel::new(&rho, 16, DEFAULT_X_POINTS)?;
    let schedule = model.allocate(4000, AllocationStrategy::Uniform)?;

    // two "detectors" each record half of every batch
    let mut left = MomentAccumulator::new(&schedule.thetas, 2)?;
    let mut right = MomentAccumulator::new(&schedule.thetas, 2)?;
    println!("exact Psi_1 = {:.4}", exact_moments(&rho, 1)?);
    for batch in 0..5u64 {
        let data = model.sample(&schedule, batch, "coherent")?;
        for (j, group) in data.groups.iter().enumerate() {
            let (a, b) = group.split_at(group.len() / 2);
            a.iter().try_for_each(|&x| left.push(j, x, &kernels))?;
            b.iter().try_for_each(|&x| right.push(j, x, &kernels))?;
        }
        let mut merged = left.clone();
        merged.merge(&right)?;
        let psi1 = merged.estimates()?[0];
        println!(
            "after {:>6} events: Psi_1 = {:.4} (+- {:.4}, {:.4})",
            merged.events(),
            psi1.value,
            psi1.stderr_re,
            psi1.stderr_im
        );
    }
    Ok(())
}
