//! The sampling kernels K_k(x) for k = 1..6 next to their classical
//! asymptotes, plus the integral-equation check of each table.
//!
//! ```bash
//! cargo run --release --example kernel_functions
//! ```

use canphase::kernels::{build_kernel_table, kernel_classical, verify_integral_equation, KernelEvaluator, TableParams};

fn main() -> canphase::Result<()> {
    println!("{:>5} {:>12} {:>12} {:>12}", "x", "K_1", "K_2", "K_3");
    let evaluators: Vec<_> = (1..=3).map(KernelEvaluator::new).collect::<Result<_, _>>()?;
    for i in 0..=12 {
        let x = 0.5 * i as f64;
        let row: Vec<f64> = evaluators.iter().map(|e| e.evaluate(x)).collect::<Result<_, _>>()?;
        println!("{x:>5.1} {:>12.6} {:>12.6} {:>12.6}", row[0], row[1], row[2]);
    }

    let params = TableParams::default();
    println!("\n k   C_k        |K - K_c| at x=6   max residual (n <= 30)");
    for k in 1..=6 {
        let table = build_kernel_table(k, &params)?;
        let c = table.asymptote_constant();
        let gap = (table.lookup(6.0) - kernel_classical(k, 6.0, c)?).abs();
        let worst = verify_integral_equation(&table, 30)?.into_iter().fold(0.0, f64::max);
        println!("{k:>2} {c:>10.6} {gap:>18.2e} {worst:>22.2e}");
    }
    Ok(())
}
