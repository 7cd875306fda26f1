//! Mean phase and phase-width measures derived from Ψ_1.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::estimator::moments::MomentEstimate;

/// φ̄ = arg Ψ_1, Δφ = arccos|Ψ_1|, σ_BP = sin Δφ, σ_H = tan Δφ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub mean_phase: f64,
    pub mean_phase_err: f64,
    pub delta_phi: f64,
    pub sigma_bp: f64,
    pub sigma_h: f64,
    /// |Ψ_1| exceeded 1 by more than three standard errors and was clamped.
    pub inconsistent: bool,
}

impl PhaseStats {
    /// Statistics of a state with Ψ_1 = 0: uniform mean phase, maximal width.
    pub fn undefined() -> Self {
        Self {
            mean_phase: f64::NAN,
            mean_phase_err: f64::NAN,
            delta_phi: std::f64::consts::FRAC_PI_2,
            sigma_bp: 1.0,
            sigma_h: f64::INFINITY,
            inconsistent: false,
        }
    }
}

/// Like [`phase_stats`] but maps Ψ_1 = 0 to [`PhaseStats::undefined`].
pub fn phase_stats_or_undefined(psi1: &MomentEstimate) -> Result<PhaseStats> {
    match phase_stats(psi1) {
        Err(Error::UndefinedPhase) => Ok(PhaseStats::undefined()),
        other => other,
    }
}

pub fn phase_stats(psi1: &MomentEstimate) -> Result<PhaseStats> {
    if psi1.k != 1 {
        return Err(argument(format!("phase statistics need Ψ_1, got k = {}", psi1.k)));
    }
    let modulus = psi1.value.norm();
    if !modulus.is_finite() {
        return Err(argument("Ψ_1 is not finite"));
    }
    if modulus == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let mean_phase = psi1.value.arg();
    let radial_err = psi1.projected_variance(mean_phase).max(0.0).sqrt();
    let tangential_err = psi1
        .projected_variance(mean_phase + std::f64::consts::FRAC_PI_2)
        .max(0.0)
        .sqrt();
    let inconsistent = modulus > 1.0 + 3.0 * radial_err;
    if inconsistent {
        log::warn!("|Ψ_1| = {modulus:.6} exceeds 1 by more than 3 standard errors ({radial_err:.2e}); clamped");
    }
    let delta_phi = modulus.min(1.0).acos();
    Ok(PhaseStats {
        mean_phase,
        mean_phase_err: tangential_err / modulus,
        delta_phi,
        sigma_bp: delta_phi.sin(),
        sigma_h: delta_phi.tan(),
        inconsistent,
    })
}
