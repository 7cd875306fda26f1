//! Simulated balanced-homodyne data: quadrature densities, the event
//! allocation over LO phases, and a dataset written to JSON.
//!
//! ```bash
//! cargo run --release --example homodyne_sampling
//! ```

use canphase::quantum_state::{squeezed_coherent_state, DensityMatrix};
use canphase::simulator::{AllocationStrategy, HomodyneDataset, QuadratureModel, DEFAULT_X_POINTS};
use num_complex::Complex64;

fn main() -> canphase::Result<()> {
    let state = squeezed_coherent_state(Complex64::from_polar(5.0, 0.6), 6.0, 160)?;
    let rho = DensityMatrix::from_pure(&state);
    let model = QuadratureModel::new(&rho, 41, DEFAULT_X_POINTS)?;

    let schedule = model.allocate(6020, AllocationStrategy::reference())?;
    println!("{:>8} {:>8} {:>7}", "theta", "x_mode", "events");
    for ((theta, n), pdf) in schedule.thetas.iter().zip(&schedule.counts).zip(model.pdfs()) {
        println!("{theta:>8.4} {:>8.3} {n:>7}", pdf.mode());
    }

    let data = model.sample(&schedule, 7, "squeezed")?;
    let group = &data.groups[0];
    let mean = group.iter().sum::<f64>() / group.len() as f64;
    println!("\n{} events; group 0 sample mean {mean:.3}", data.total_events());

    let json = data.to_json()?;
    let back = HomodyneDataset::from_json(&json)?;
    assert_eq!(back, data);
    println!("JSON round trip ok ({} bytes)", json.len());
    Ok(())
}
