//! Quadrature distributions p(x, ϑ) seen by a balanced homodyne detector.

use num_complex::Complex64;

use crate::error::{argument, Result};
use crate::quantum_state::density::DensityMatrix;
use crate::quantum_state::hermite::psi_sequence;

/// Densities below this magnitude that come out negative are set to zero.
const NEGATIVE_CLIP: f64 = 1e-12;

/// p(x, ϑ) on a uniform grid, with its cumulative distribution.
#[derive(Debug, Clone)]
pub struct QuadraturePdf {
    pub theta: f64,
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoidal running integral, renormalised to end at 1.
    pub cdf: Vec<f64>,
}

impl QuadraturePdf {
    /// Trapezoidal integral of the density before renormalisation.
    pub fn raw_mass(&self) -> f64 {
        trapezoid(&self.x_grid, &self.values)
    }

    /// Grid point of the largest density.
    pub fn mode(&self) -> f64 {
        let i = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.x_grid[i]
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// `n` equally spaced points on [−half_width, half_width].
pub fn uniform_grid(half_width: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

/// Half-width √(2D) + 5 that a quadrature grid must reach for dimension D.
pub fn required_half_width(dim: usize) -> f64 {
    (2.0 * dim as f64).sqrt() + 5.0
}

/// ψ_n(x_i) for all grid points, reusable across LO phases.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    x_grid: Vec<f64>,
    dim: usize,
    /// Row-major: values[i * dim + n] = ψ_n(x_i).
    values: Vec<f64>,
}

impl HermiteBasis {
    pub fn new(dim: usize, x_grid: &[f64]) -> Result<Self> {
        let need = required_half_width(dim);
        let (lo, hi) = (
            x_grid.first().copied().unwrap_or(0.0),
            x_grid.last().copied().unwrap_or(0.0),
        );
        if x_grid.len() < 3 || lo > -need || hi < need {
            return Err(argument(format!(
                "quadrature grid [{lo}, {hi}] must cover |x| ≤ {need:.3} for Fock dimension {dim}"
            )));
        }
        if x_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(argument("quadrature grid must be strictly increasing"));
        }
        let mut values = Vec::with_capacity(dim * x_grid.len());
        for &x in x_grid {
            values.extend(psi_sequence(dim - 1, x));
        }
        Ok(Self {
            x_grid: x_grid.to_vec(),
            dim,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    /// p(x, ϑ) = Σ_components w |Σ_n c_n e^{−inϑ} ψ_n(x)|².
    pub fn quadrature_pdf(&self, rho: &DensityMatrix, theta: f64) -> Result<QuadraturePdf> {
        if rho.dim() != self.dim {
            return Err(argument(format!(
                "state dimension {} does not match basis dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        let rotated: Vec<(f64, Vec<Complex64>)> = rho
            .components()
            .iter()
            .map(|c| {
                let amps = c
                    .amplitudes
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a * Complex64::from_polar(1.0, -(n as f64) * theta))
                    .collect();
                (c.weight, amps)
            })
            .collect();
        let values: Vec<f64> = self
            .values
            .chunks_exact(self.dim)
            .map(|psi| {
                let p: f64 = rotated
                    .iter()
                    .map(|(w, amps)| {
                        let s: Complex64 = amps.iter().zip(psi).map(|(a, &p)| a * p).sum();
                        w * s.norm_sqr()
                    })
                    .sum();
                if p < 0.0 && p > -NEGATIVE_CLIP {
                    0.0
                } else {
                    p.max(0.0)
                }
            })
            .collect();
        let mut cdf = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for (xw, yw) in self.x_grid.windows(2).zip(values.windows(2)) {
            acc += 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]);
            cdf.push(acc);
        }
        if acc.is_nan() || acc <= 0.0 {
            return Err(argument("quadrature density integrates to zero on the grid"));
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Ok(QuadraturePdf {
            theta,
            x_grid: self.x_grid.clone(),
            values,
            cdf,
        })
    }
}

/// p(x, ϑ) = Σ_{n,m} ψ_n(x) ψ_m(x) ϱ_{m,n} e^{i(n−m)ϑ} on `x_grid`.
pub fn quadrature_pdf(rho: &DensityMatrix, theta: f64, x_grid: &[f64]) -> Result<QuadraturePdf> {
    HermiteBasis::new(rho.dim(), x_grid)?.quadrature_pdf(rho, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::fock::{coherent_state, FockVector};
    use std::f64::consts::PI;

    #[test]
    fn vacuum_and_first_excited_state() {
        let grid = uniform_grid(12.0, 2001);
        let vac = DensityMatrix::from_pure(&FockVector::vacuum(8).unwrap());
        let one = DensityMatrix::from_pure(&FockVector::number(1, 8).unwrap());
        for theta in [0.0, 1.3] {
            let p0 = quadrature_pdf(&vac, theta, &grid).unwrap();
            let p1 = quadrature_pdf(&one, theta, &grid).unwrap();
            for (i, &x) in grid.iter().enumerate() {
                assert!((p0.values[i] - (-x * x).exp() / PI.sqrt()).abs() < 1e-14);
                assert!((p1.values[i] - 2.0 * x * x * (-x * x).exp() / PI.sqrt()).abs() < 1e-14);
            }
            assert!((p0.raw_mass() - 1.0).abs() < 1e-6);
            assert_eq!(*p0.cdf.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn coherent_state_scaling_convention() {
        let rho = DensityMatrix::from_pure(&coherent_state(Complex64::new(2.0, 0.0), 40).unwrap());
        let grid = uniform_grid(14.0, 4001);
        let p = quadrature_pdf(&rho, 0.0, &grid).unwrap();
        let center = 2.0 * 2f64.sqrt();
        for (i, &x) in grid.iter().enumerate() {
            let expected = (-(x - center).powi(2)).exp() / PI.sqrt();
            assert!((p.values[i] - expected).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn narrow_grid_rejected() {
        let rho = DensityMatrix::from_pure(&FockVector::vacuum(50).unwrap());
        assert!(quadrature_pdf(&rho, 0.0, &uniform_grid(8.0, 101)).is_err());
    }
}
