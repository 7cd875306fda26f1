//! Distribution of measurement events over local-oscillator phases.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::quantum_state::QuadraturePdf;

/// How the total event budget is split across LO phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AllocationStrategy {
    Uniform,
    /// Weight w_j = exp(−x_mode(ϑ_j)²/2), clamped to [min_events, max_events].
    Psi1Optimal {
        min_events: usize,
        max_events: usize,
    },
}

impl AllocationStrategy {
    pub fn reference() -> Self {
        Self::Psi1Optimal {
            min_events: 10,
            max_events: 800,
        }
    }
}

/// LO phases 2πj/N_ϑ with their event counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub thetas: Vec<f64>,
    pub counts: Vec<usize>,
}

impl PhaseSchedule {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.thetas.len();
        if n == 0 || self.counts.len() != n {
            return Err(argument("schedule needs one count per LO phase"));
        }
        let step = 2.0 * std::f64::consts::PI / n as f64;
        for (j, &t) in self.thetas.iter().enumerate() {
            if (t - step * j as f64).abs() > 1e-12 {
                return Err(argument(format!("LO phase {j} = {t} is not on the equidistant grid")));
            }
        }
        if self.counts.contains(&0) {
            return Err(argument("every LO phase needs at least one event"));
        }
        Ok(())
    }
}

/// ϑ_j = 2πj/N for j = 0..N.
pub fn equidistant_phases(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
        .collect()
}

/// Splits `total` events over the phases of `pdfs` (one density per phase,
/// in equidistant order).
///
/// For `Psi1Optimal` the clamps are loosened when they cannot be met:
/// min becomes ⌊total/N⌋ if N·min > total, and max becomes ⌈total/N⌉ if
/// N·max < total.
pub fn allocate_from_pdfs(total: usize, pdfs: &[QuadraturePdf], strategy: AllocationStrategy) -> Result<PhaseSchedule> {
    let n = pdfs.len();
    if n == 0 {
        return Err(argument("no LO phases to allocate events to"));
    }
    if total < n {
        return Err(argument(format!(
            "total events {total} below the number of LO phases {n}"
        )));
    }
    let thetas = equidistant_phases(n);
    for (pdf, t) in pdfs.iter().zip(&thetas) {
        if (pdf.theta - t).abs() > 1e-12 {
            return Err(argument(
                "quadrature densities must be given on the equidistant LO phases",
            ));
        }
    }
    let counts = match strategy {
        AllocationStrategy::Uniform => uniform_counts(total, n),
        AllocationStrategy::Psi1Optimal { min_events, max_events } => {
            if min_events > max_events || min_events == 0 {
                return Err(argument(format!("invalid clamps [{min_events}, {max_events}]")));
            }
            let lo = min_events.min(total / n).max(1);
            let hi = max_events.max(total.div_ceil(n));
            let weights: Vec<f64> = pdfs.iter().map(|p| (-0.5 * p.mode().powi(2)).exp()).collect();
            clamped_proportional(total, &weights, lo, hi)
        }
    };
    let schedule = PhaseSchedule { thetas, counts };
    schedule.validate()?;
    Ok(schedule)
}

fn uniform_counts(total: usize, n: usize) -> Vec<usize> {
    let base = total / n;
    let extra = total % n;
    (0..n).map(|j| base + usize::from(j < extra)).collect()
}

/// Counts ∝ weights, clamped to [lo, hi], summing to `total`.
fn clamped_proportional(total: usize, weights: &[f64], lo: usize, hi: usize) -> Vec<usize> {
    let clamp = |scale: f64| -> Vec<f64> {
        weights
            .iter()
            .map(|w| (scale * w).clamp(lo as f64, hi as f64))
            .collect()
    };
    let sum = |v: &[f64]| v.iter().sum::<f64>();
    let wmax = weights.iter().cloned().fold(0.0, f64::max);
    if wmax <= 0.0 {
        return uniform_counts(total, weights.len());
    }
    // bisection on the scale: Σ clamp(scale w_j) is nondecreasing in scale
    let (mut a, mut b) = (
        0.0,
        hi as f64
            / weights
                .iter()
                .cloned()
                .filter(|&w| w > 0.0)
                .fold(f64::INFINITY, f64::min),
    );
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if sum(&clamp(mid)) < total as f64 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let real = clamp(b);
    let mut counts: Vec<usize> = real.iter().map(|r| r.floor() as usize).collect();
    let mut missing = total as isize - counts.iter().sum::<usize>() as isize;
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&i, &j| {
        (real[j] - real[j].floor())
            .total_cmp(&(real[i] - real[i].floor()))
            .then(i.cmp(&j))
    });
    let mut idx = 0;
    while missing > 0 {
        let j = order[idx % order.len()];
        if counts[j] < hi {
            counts[j] += 1;
            missing -= 1;
        }
        idx += 1;
    }
    while missing < 0 {
        let j = order[order.len() - 1 - (idx % order.len())];
        if counts[j] > lo {
            counts[j] -= 1;
            missing += 1;
        }
        idx += 1;
    }
    counts
}
