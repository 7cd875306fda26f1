//! The special functions behind the kernels: the Kummer function Φ(a, b, y)
//! for b = 1/2 and 3/2, and the densities of Σ_j t_j² mixed over weights.
//!
//! ```bash
//! cargo run --release --example special_functions
//! ```

use canphase::kernels::{kummer_phi, MixingSeries};
use canphase::quantum_state::hermite_psi;

fn main() -> canphase::Result<()> {
    println!(
        "{:>6} {:>16} {:>16} {:>16}",
        "y", "Phi(1,1/2,y)", "Phi(3,1/2,y)", "Phi(2,3/2,y)"
    );
    for y in [-25.0, -10.0, -1.0, 0.0, 1.0, 10.0, 25.0] {
        println!(
            "{y:>6} {:>16.9e} {:>16.9e} {:>16.9e}",
            kummer_phi(1, 0.5, y)?,
            kummer_phi(3, 0.5, y)?,
            kummer_phi(2, 1.5, y)?
        );
    }

    println!("\n k  mass        s_max    f_k(0.5)");
    for k in 1..=8 {
        let f = MixingSeries::new(k)?;
        println!("{k:>2}  {:.10}  {:>6.2}   {:.6}", f.mass()?, f.s_max(), f.density(0.5));
    }

    println!("\npsi_50(2) = {:.15e}", hermite_psi(50, 2.0)?);
    Ok(())
}
