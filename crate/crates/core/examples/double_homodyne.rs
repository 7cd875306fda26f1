//! Double-homodyne (Q-function) events and the moments of the radially
//! integrated Q function, next to the exact canonical moments.
//!
//! ```bash
//! cargo run --release --example double_homodyne
//! ```

use canphase::estimator::{phase_stats, q_moments};
use canphase::quantum_state::{exact_moments, squeezed_coherent_state, DensityMatrix};
use canphase::simulator::{q_function, sample_double_homodyne};
use num_complex::Complex64;

fn main() -> canphase::Result<()> {
    let alpha = Complex64::from_polar(5.0, 0.6);
    let rho = DensityMatrix::from_pure(&squeezed_coherent_state(alpha, 6.0, 160)?);
    println!(
        "Q(alpha) = {:.4}, Q(0) = {:.3e}",
        q_function(&rho, alpha)?,
        q_function(&rho, Complex64::new(0.0, 0.0))?
    );

    let data = sample_double_homodyne(&rho, 6020, 11, "squeezed")?;
    println!(
        "acceptance {:.3} on radius {:.2}, envelope violations {}",
        data.stats.acceptance_rate(),
        data.stats.radius,
        data.stats.envelope_violations
    );

    let q = q_moments(&data, 4)?;
    println!("\n k  |Psi_k^Q|          |Psi_k| exact");
    for e in &q {
        println!(
            "{:>2}  {:.4} +- {:.4}   {:.4}",
            e.k,
            e.value.norm(),
            e.stderr_re.hypot(e.stderr_im),
            exact_moments(&rho, e.k)?.norm()
        );
    }
    let p = phase_stats(&q[0])?;
    println!(
        "\nmean phase {:.4} +- {:.4}, delta phi {:.4}",
        p.mean_phase, p.mean_phase_err, p.delta_phi
    );
    Ok(())
}
