//! Exact Ψ_k and the canonical phase density for a few states, including the
//! phase-squeezed coherent state α = 5e^{0.6i}, s = 6.
//!
//! ```bash
//! cargo run --release --example exact_moments
//! ```

use canphase::quantum_state::{
    canonical_phase_pdf, coherent_state, exact_moments, mean_photon, phase_grid, squeezed_coherent_state,
    DensityMatrix, FockVector,
};
use num_complex::Complex64;

fn main() -> canphase::Result<()> {
    let alpha = Complex64::from_polar(5.0, 0.6);
    let states = [
        ("vacuum", DensityMatrix::from_pure(&FockVector::vacuum(40)?)),
        ("|3>", DensityMatrix::from_pure(&FockVector::number(3, 40)?)),
        (
            "coherent 5e^0.6i",
            DensityMatrix::from_pure(&coherent_state(alpha, 160)?),
        ),
        (
            "squeezed s=6",
            DensityMatrix::from_pure(&squeezed_coherent_state(alpha, 6.0, 160)?),
        ),
    ];
    for (name, rho) in &states {
        let psi1 = exact_moments(rho, 1)?;
        println!(
            "{name:<18} <n> = {:>8.4}  |Psi_1| = {:.6}  arg = {:+.4}",
            mean_photon(rho),
            psi1.norm(),
            psi1.arg()
        );
        for k in 2..=4 {
            let v = exact_moments(rho, k)?;
            println!("{:<18} Psi_{k} = {:+.6} {:+.6}i", "", v.re, v.im);
        }
    }

    // p(φ) of the squeezed state against the coherent one, around φ = 0.6
    let grid = phase_grid(0.6, 360);
    let coherent = canonical_phase_pdf(&states[2].1, &grid);
    let squeezed = canonical_phase_pdf(&states[3].1, &grid);
    println!("\n{:>8} {:>10} {:>10}", "phi", "coherent", "squeezed");
    for j in (150..=210).step_by(6) {
        println!("{:>8.4} {:>10.4} {:>10.4}", grid[j], coherent[j], squeezed[j]);
    }
    Ok(())
}
