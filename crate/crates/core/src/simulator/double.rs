//! Eight-port (double) homodyne detection, modelled as ideal sampling of the
//! Husimi function Q(β) = ⟨β|ϱ|β⟩/π.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{argument, numerical, Result};
use crate::quantum_state::{mean_photon, DensityMatrix};
use crate::simulator::homodyne::{group_rng, DATASET_FORMAT_VERSION};

/// Largest |β|² at which Q is evaluated, as a multiple of max(D, 32).
const RADIUS_SQ_LIMIT: f64 = 2.0;
const ENVELOPE_GRID_STEP: f64 = 0.1;
const ENVELOPE_MARGIN: f64 = 1.1;
const MIN_ACCEPTANCE: f64 = 1e-4;
/// Proposals after which a too-low acceptance rate is reported.
const ACCEPTANCE_CHECK_AFTER: u64 = 100_000;

/// Q(β) for a fixed state; amplitudes are pre-divided by √n! so each
/// evaluation is a single Horner pass in β*.
#[derive(Debug, Clone)]
pub struct HusimiQ {
    dim: usize,
    components: Vec<(f64, Vec<Complex64>)>,
}

impl HusimiQ {
    pub fn new(rho: &DensityMatrix) -> Self {
        let components = rho
            .components()
            .iter()
            .map(|c| {
                let scaled = c
                    .amplitudes
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a * (-0.5 * ln_gamma(n as f64 + 1.0)).exp())
                    .collect();
                (c.weight, scaled)
            })
            .collect();
        Self {
            dim: rho.dim(),
            components,
        }
    }

    /// Largest |β|² accepted by [`HusimiQ::value`].
    pub fn radius_sq_limit(&self) -> f64 {
        RADIUS_SQ_LIMIT * self.dim.max(32) as f64
    }

    pub fn value(&self, beta: Complex64) -> Result<f64> {
        let r2 = beta.norm_sqr();
        if r2.is_nan() || r2 > self.radius_sq_limit() {
            return Err(argument(format!(
                "|β|² = {:.3} exceeds the safe range {:.1} for Fock dimension {}",
                beta.norm_sqr(),
                self.radius_sq_limit(),
                self.dim
            )));
        }
        Ok(self.value_unchecked(beta))
    }

    fn value_unchecked(&self, beta: Complex64) -> f64 {
        let bc = beta.conj();
        let gauss = (-beta.norm_sqr()).exp() / PI;
        self.components
            .iter()
            .map(|(w, d)| {
                let overlap = d.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * bc + a);
                w * overlap.norm_sqr()
            })
            .sum::<f64>()
            * gauss
    }
}

/// Q(β) = ⟨β|ϱ|β⟩/π.
pub fn q_function(rho: &DensityMatrix, beta: Complex64) -> Result<f64> {
    HusimiQ::new(rho).value(beta)
}

/// Complex amplitudes recorded by an ideal double-homodyne detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleHomodyneDataset {
    pub format_version: u32,
    pub state_label: String,
    pub seed: u64,
    pub betas: Vec<Complex64>,
    pub stats: RejectionStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RejectionStats {
    pub radius: f64,
    pub envelope: f64,
    pub proposals: u64,
    pub accepted: u64,
    /// Proposals where Q exceeded the envelope.
    pub envelope_violations: u64,
}

impl RejectionStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

impl DoubleHomodyneDataset {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: Self = serde_json::from_str(text)?;
        if data.format_version != DATASET_FORMAT_VERSION {
            return Err(argument(format!(
                "unsupported dataset format version {}",
                data.format_version
            )));
        }
        if data.betas.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(argument("double-homodyne dataset contains non-finite amplitudes"));
        }
        Ok(data)
    }
}

/// Largest Q on a square grid of spacing 0.1 covering the disk |β| ≤ radius.
fn grid_maximum(q: &HusimiQ, radius: f64) -> f64 {
    let n = (radius / ENVELOPE_GRID_STEP).ceil() as i64;
    let mut best = 0.0_f64;
    for i in -n..=n {
        for j in -n..=n {
            let b = Complex64::new(i as f64 * ENVELOPE_GRID_STEP, j as f64 * ENVELOPE_GRID_STEP);
            if b.norm() <= radius {
                best = best.max(q.value_unchecked(b));
            }
        }
    }
    best
}

/// Draws `n_events` amplitudes from Q by rejection sampling on the disk
/// |β| ≤ √(2⟨n⟩) + 5 under the envelope 1.1 · max_grid Q.
pub fn sample_double_homodyne(
    rho: &DensityMatrix,
    n_events: usize,
    seed: u64,
    state_label: &str,
) -> Result<DoubleHomodyneDataset> {
    let q = HusimiQ::new(rho);
    let radius = (2.0 * mean_photon(rho)).sqrt() + 5.0;
    if radius * radius > q.radius_sq_limit() {
        return Err(argument(format!(
            "sampling disk radius {radius:.3} is outside the safe range for Fock dimension {}",
            rho.dim()
        )));
    }
    let envelope = ENVELOPE_MARGIN * grid_maximum(&q, radius);
    let mut stats = RejectionStats {
        radius,
        envelope,
        proposals: 0,
        accepted: 0,
        envelope_violations: 0,
    };
    let mut rng = group_rng(seed, u64::MAX);
    let mut betas = Vec::with_capacity(n_events);
    while betas.len() < n_events {
        let r = radius * rng.random::<f64>().sqrt();
        let phi = 2.0 * PI * rng.random::<f64>();
        let beta = Complex64::from_polar(r, phi);
        let height = envelope * rng.random::<f64>();
        let value = q.value_unchecked(beta);
        stats.proposals += 1;
        if value > envelope {
            stats.envelope_violations += 1;
        }
        if height < value {
            betas.push(beta);
            stats.accepted += 1;
        }
        if stats.proposals >= ACCEPTANCE_CHECK_AFTER && stats.acceptance_rate() < MIN_ACCEPTANCE {
            return Err(numerical(format!(
                "rejection sampler acceptance {:.2e} below {MIN_ACCEPTANCE:e}; envelope {envelope:.3e} misconfigured",
                stats.acceptance_rate()
            )));
        }
    }
    if stats.envelope_violations > 0 {
        log::warn!(
            "Q exceeded the rejection envelope on {} proposals",
            stats.envelope_violations
        );
    }
    Ok(DoubleHomodyneDataset {
        format_version: DATASET_FORMAT_VERSION,
        state_label: state_label.to_string(),
        seed,
        betas,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::{coherent_state, FockVector};

    #[test]
    fn vacuum_q_function() {
        let rho = DensityMatrix::from_pure(&FockVector::vacuum(6).unwrap());
        assert!((q_function(&rho, Complex64::new(0.0, 0.0)).unwrap() - 1.0 / PI).abs() < 1e-15);
        let b = Complex64::new(0.7, -1.2);
        assert!((q_function(&rho, b).unwrap() - (-b.norm_sqr()).exp() / PI).abs() < 1e-15);
        assert!(q_function(&rho, Complex64::new(9.0, 0.0)).is_err());
    }

    #[test]
    fn coherent_q_is_displaced_gaussian() {
        let alpha = Complex64::new(1.0, 0.5);
        let rho = DensityMatrix::from_pure(&coherent_state(alpha, 40).unwrap());
        for b in [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.5),
            Complex64::new(-2.0, 1.0),
        ] {
            let expected = (-(b - alpha).norm_sqr()).exp() / PI;
            assert!((q_function(&rho, b).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_events_give_empty_dataset() {
        let rho = DensityMatrix::from_pure(&FockVector::vacuum(4).unwrap());
        let d = sample_double_homodyne(&rho, 0, 1, "vacuum").unwrap();
        assert!(d.betas.is_empty());
        assert_eq!(d.stats.proposals, 0);
    }
}
