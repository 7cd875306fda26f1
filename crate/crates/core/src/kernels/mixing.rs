//! Density of S = Σ_{j=1..k} t_j² under the weight Π_j e^{−j t_j²}.
//!
//! Each t_j² is Gamma-distributed with shape 1/2 and rate j, so S is a sum of
//! independent Gamma variables with a common shape and distinct rates. Its
//! density is evaluated with the Moschopoulos series, a positive series in
//! Gamma(k/2 + i, rate k) densities:
//!
//! ```text
//! f(s) = C Σ_i δ_i s^{k/2+i−1} e^{−ks} k^{k/2+i} / Γ(k/2+i)
//! C    = Π_j (j/k)^{1/2}
//! γ_i  = Σ_j (1 − j/k)^i / (2i)
//! δ_0  = 1,  δ_{i+1} = (1/(i+1)) Σ_{l=1}^{i+1} l γ_l δ_{i+1−l}
//! ```
//!
//! All coefficients are nonnegative, so there is no cancellation.

use statrs::function::gamma::ln_gamma;

use crate::error::{argument, Result};
use crate::kernels::quadrature::{integrate, Tolerance};

pub const MAX_ORDER: u32 = 12;

/// Upper-tail threshold used to cut the s-integrals.
const TAIL_DENSITY: f64 = 1e-14;

/// Precomputed series for the mixing density of order `k`.
#[derive(Debug, Clone)]
pub struct MixingSeries {
    k: u32,
    rho: f64,
    /// ln of C δ_i k^{ρ+i} / Γ(ρ+i); `-inf` where δ_i = 0.
    log_coeffs: Vec<f64>,
    s_max: f64,
}

impl MixingSeries {
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&k) {
            return Err(argument(format!(
                "mixing density order k = {k} outside 1..={MAX_ORDER}"
            )));
        }
        let kf = k as f64;
        let rho = 0.5 * kf;
        let n_terms = 80 + 80 * (k as usize - 1);
        let gamma: Vec<f64> = (0..=n_terms)
            .map(|i| {
                if i == 0 {
                    0.0
                } else {
                    (1..=k).map(|j| (1.0 - j as f64 / kf).powi(i as i32)).sum::<f64>() / (2.0 * i as f64)
                }
            })
            .collect();
        let mut delta = vec![0.0; n_terms];
        delta[0] = 1.0;
        for i in 0..n_terms - 1 {
            let acc: f64 = (1..=i + 1).map(|l| l as f64 * gamma[l] * delta[i + 1 - l]).sum();
            delta[i + 1] = acc / (i + 1) as f64;
        }
        let log_c: f64 = (1..=k).map(|j| 0.5 * (j as f64 / kf).ln()).sum();
        let log_coeffs = delta
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let shape = rho + i as f64;
                if d > 0.0 {
                    log_c + d.ln() + shape * kf.ln() - ln_gamma(shape)
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let mut series = Self {
            k,
            rho,
            log_coeffs,
            s_max: 0.0,
        };
        series.s_max = series.find_tail(TAIL_DENSITY);
        Ok(series)
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    /// ln Π_j √(π/j): the total mass of the weight, absorbed out of the density.
    pub fn log_weight(&self) -> f64 {
        (1..=self.k).map(|j| 0.5 * (std::f64::consts::PI / j as f64).ln()).sum()
    }

    /// Point beyond which the density stays below 1e-14.
    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    /// f(s) for s > 0; the s → 0 limit at s = 0.
    pub fn density(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return match self.k {
                1 => f64::INFINITY,
                2 => self.log_coeffs[0].exp(),
                _ => 0.0,
            };
        }
        let kf = self.k as f64;
        let ln_s = s.ln();
        let peak = ((kf - 1.0) * s).ceil() as usize;
        let mut sum = 0.0;
        for (i, &lc) in self.log_coeffs.iter().enumerate() {
            if lc == f64::NEG_INFINITY {
                if i > peak {
                    break;
                }
                continue;
            }
            let term = (lc + (self.rho + i as f64 - 1.0) * ln_s - kf * s).exp();
            sum += term;
            if i > peak + 4 && term <= 1e-17 * sum {
                break;
            }
        }
        sum
    }

    fn find_tail(&self, threshold: f64) -> f64 {
        let mut s = 1.0;
        while self.density(s) >= threshold || s < 2.0 {
            s += 0.25;
        }
        s
    }

    /// Total probability mass by adaptive quadrature in u = √s.
    pub fn mass(&self) -> Result<f64> {
        let u_max = self.s_max.sqrt();
        let breaks: Vec<f64> = (0..=8).map(|i| u_max * i as f64 / 8.0).collect();
        let tol = Tolerance {
            abs: 1e-13,
            rel: 1e-13,
            max_intervals: 4000,
        };
        Ok(integrate(|u| 2.0 * u * self.density(u * u), &breaks, tol)?.value)
    }
}

/// Tabulated mixing density on a caller-supplied grid.
#[derive(Debug, Clone)]
pub struct MixingDensity {
    pub k: u32,
    pub s_grid: Vec<f64>,
    pub f_values: Vec<f64>,
    /// ln Π_j √(π/j), the normalisation taken out of `f_values`.
    pub log_weight: f64,
}

/// Tabulates the density of Σ t_j² on `s_grid`, which must start at 0,
/// increase, and extend far enough that the density has dropped below 1e-12.
pub fn mixing_density(k: u32, s_grid: &[f64]) -> Result<MixingDensity> {
    let series = MixingSeries::new(k)?;
    if s_grid.len() < 2 || s_grid[0] != 0.0 {
        return Err(argument("mixing density grid must start at s = 0"));
    }
    if s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(argument("mixing density grid must be strictly increasing"));
    }
    let last = s_grid[s_grid.len() - 1];
    let mode = (0.5 * k as f64 - 1.0).max(0.0) / k as f64;
    if last <= mode || series.density(last) >= 1e-12 {
        return Err(argument(format!(
            "mixing density grid ends at s = {last}, where f = {:.3e} is not below 1e-12",
            series.density(last)
        )));
    }
    Ok(MixingDensity {
        k,
        s_grid: s_grid.to_vec(),
        f_values: s_grid.iter().map(|&s| series.density(s)).collect(),
        log_weight: series.log_weight(),
    })
}

impl MixingDensity {
    /// Least-squares slope of ln f against ln s over grid points with
    /// 0 < s ≤ `s_upper`.
    pub fn small_s_log_slope(&self, s_upper: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .s_grid
            .iter()
            .zip(&self.f_values)
            .filter(|(&s, &f)| s > 0.0 && s <= s_upper && f > 0.0)
            .map(|(&s, &f)| (s.ln(), f.ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}
