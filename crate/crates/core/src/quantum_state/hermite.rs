//! Normalised harmonic-oscillator eigenfunctions
//! ψ_n(x) = (2ⁿ n! √π)^{−1/2} e^{−x²/2} H_n(x).

use crate::error::{argument, Result};

pub const MAX_HERMITE_INDEX: usize = 1024;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_LOG: f64 = 345.387_763_949_107_1; // ln(1e150)

/// ψ_n(x) from the recurrence on normalised functions,
/// ψ_{n+1} = x √(2/(n+1)) ψ_n − √(n/(n+1)) ψ_{n−1}.
pub fn hermite_psi(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_INDEX {
        return Err(argument(format!("Hermite index n = {n} exceeds {MAX_HERMITE_INDEX}")));
    }
    if !x.is_finite() {
        return Err(argument(format!("Hermite argument x = {x} is not finite")));
    }
    let mut last = 0.0;
    psi_recurrence(n, x, |_, v| last = v);
    Ok(last)
}

/// ψ_0(x), …, ψ_{n_max}(x).
pub fn psi_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    psi_recurrence(n_max, x, |_, v| out.push(v));
    out
}

// The recurrence runs on ψ_n e^{−log_scale}; the Gaussian prefactor is kept in
// log form so that large |x| and large n neither underflow nor overflow.
fn psi_recurrence(n_max: usize, x: f64, mut emit: impl FnMut(usize, f64)) {
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    let restore = |v: f64, log_scale: f64| {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs().ln() + log_scale).exp()
        }
    };
    emit(0, restore(cur, log_scale));
    for n in 0..n_max {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_LOG;
        }
        emit(n + 1, restore(cur, log_scale));
    }
}
