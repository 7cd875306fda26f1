//! Moments of the radially integrated Q function from double-homodyne data.

use num_complex::Complex64;

use crate::error::{argument, numerical, Result};
use crate::estimator::moments::MomentEstimate;
use crate::simulator::DoubleHomodyneDataset;

/// Ψ̂^Q_k = (1/N) Σ e^{ik arg β_i} for k = 1..=k_max. Events at β = 0 have
/// no phase; they are dropped and `n_events_used` excludes them.
pub fn q_moments(data: &DoubleHomodyneDataset, k_max: usize) -> Result<Vec<MomentEstimate>> {
    if data.betas.is_empty() {
        return Err(argument("double-homodyne dataset is empty"));
    }
    if k_max == 0 {
        return Err(argument("k_max must be at least 1"));
    }
    let phases: Vec<f64> = data
        .betas
        .iter()
        .filter(|b| b.norm_sqr() > 0.0)
        .map(|b| b.arg())
        .collect();
    let discarded = data.betas.len() - phases.len();
    if phases.is_empty() {
        return Err(numerical("every double-homodyne event sits at β = 0; phase undefined"));
    }
    if discarded > 0 {
        log::warn!("{discarded} double-homodyne events at β = 0 discarded");
    }
    let n = phases.len() as f64;
    Ok((1..=k_max)
        .map(|k| {
            let kf = k as f64;
            let (mut sc, mut ss) = (0.0, 0.0);
            for &p in &phases {
                let (s, c) = (kf * p).sin_cos();
                sc += c;
                ss += s;
            }
            let (mc, ms) = (sc / n, ss / n);
            let (mut vc, mut vs, mut cv) = (0.0, 0.0, 0.0);
            for &p in &phases {
                let (s, c) = (kf * p).sin_cos();
                vc += (c - mc).powi(2);
                vs += (s - ms).powi(2);
                cv += (c - mc) * (s - ms);
            }
            let dof = (n - 1.0).max(1.0);
            MomentEstimate {
                k: k as i32,
                value: Complex64::new(mc, ms),
                stderr_re: (vc / dof / n).sqrt(),
                stderr_im: (vs / dof / n).sqrt(),
                cov_re_im: cv / dof / n,
                n_events_used: phases.len(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::RejectionStats;

    fn dataset(betas: Vec<Complex64>) -> DoubleHomodyneDataset {
        DoubleHomodyneDataset {
            format_version: 1,
            state_label: String::new(),
            seed: 0,
            betas,
            stats: RejectionStats {
                radius: 1.0,
                envelope: 1.0,
                proposals: 0,
                accepted: 0,
                envelope_violations: 0,
            },
        }
    }

    #[test]
    fn zeros_are_discarded() {
        let d = dataset(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 3.0),
        ]);
        let m = q_moments(&d, 2).unwrap();
        assert_eq!(m[0].n_events_used, 2);
        assert!((m[0].value - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!((m[1].value - Complex64::new(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn all_zero_is_an_error() {
        assert!(q_moments(&dataset(vec![Complex64::new(0.0, 0.0); 3]), 1).is_err());
        assert!(q_moments(&dataset(vec![]), 1).is_err());
    }
}
