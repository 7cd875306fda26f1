//! Density matrices and the exact canonical-phase quantities.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{argument, Result};
use crate::quantum_state::fock::FockVector;

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = -1e-8;
/// Eigencomponents lighter than this are dropped from the pure-state mixture.
const WEIGHT_CUTOFF: f64 = 1e-14;

/// A weighted pure component of a density matrix.
#[derive(Debug, Clone)]
pub struct Component {
    pub weight: f64,
    pub amplitudes: Vec<Complex64>,
}

/// Hermitian, unit-trace, positive semidefinite operator on a truncated
/// Fock space, kept together with its decomposition into pure components.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    elements: DMatrix<Complex64>,
    components: Vec<Component>,
}

impl DensityMatrix {
    pub fn from_pure(state: &FockVector) -> Self {
        let c = state.coefficients();
        let d = c.len();
        let elements = DMatrix::from_fn(d, d, |m, n| c[m] * c[n].conj());
        Self {
            elements,
            components: vec![Component {
                weight: 1.0,
                amplitudes: c.to_vec(),
            }],
        }
    }

    /// Validates a general matrix. The Hermitian part (A + A†)/2 is kept, so
    /// the stored matrix is Hermitian exactly.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return Err(argument("density matrix must be square with D ≥ 1"));
        }
        let d = matrix.nrows();
        let elements = DMatrix::from_fn(d, d, |m, n| {
            if m == n {
                Complex64::new(matrix[(m, m)].re, 0.0)
            } else {
                0.5 * (matrix[(m, n)] + matrix[(n, m)].conj())
            }
        });
        let trace: f64 = (0..d).map(|n| elements[(n, n)].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(argument(format!("density matrix trace {trace} differs from 1")));
        }
        let eig = elements.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < PSD_TOL {
            return Err(argument(format!("density matrix has negative eigenvalue {min:.3e}")));
        }
        let components = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > WEIGHT_CUTOFF)
            .map(|(i, &w)| Component {
                weight: w,
                amplitudes: eig.eigenvectors.column(i).iter().cloned().collect(),
            })
            .collect();
        Ok(Self { elements, components })
    }

    /// Convex mixture Σ p_i |ψ_i⟩⟨ψ_i|; weights are normalised.
    pub fn mixture(states: &[(f64, FockVector)]) -> Result<Self> {
        let d = states
            .first()
            .map(|s| s.1.dim())
            .ok_or_else(|| argument("empty mixture"))?;
        let total: f64 = states.iter().map(|s| s.0).sum();
        if states.iter().any(|s| s.1.dim() != d || s.0 < 0.0) || total <= 0.0 {
            return Err(argument("mixture needs equal dimensions and nonnegative weights"));
        }
        let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (w, s) in states {
            let c = s.coefficients();
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += w / total * c[i] * c[j].conj();
                }
            }
        }
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    /// ϱ_{m,n} = ⟨m|ϱ|n⟩.
    pub fn element(&self, m: usize, n: usize) -> Complex64 {
        self.elements[(m, n)]
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|n| self.elements[(n, n)].re).sum()
    }

    /// e^{iφ n̂} ϱ e^{−iφ n̂}.
    pub fn rotated(&self, phi: f64) -> Self {
        let d = self.dim();
        let elements = DMatrix::from_fn(d, d, |m, n| {
            self.elements[(m, n)] * Complex64::from_polar(1.0, phi * (m as f64 - n as f64))
        });
        let components = self
            .components
            .iter()
            .map(|c| Component {
                weight: c.weight,
                amplitudes: c
                    .amplitudes
                    .iter()
                    .enumerate()
                    .map(|(n, a)| a * Complex64::from_polar(1.0, phi * n as f64))
                    .collect(),
            })
            .collect();
        Self { elements, components }
    }
}

/// ⟨n⟩ = Σ n ϱ_{n,n}.
pub fn mean_photon(rho: &DensityMatrix) -> f64 {
    (0..rho.dim()).map(|n| n as f64 * rho.element(n, n).re).sum()
}

/// Ψ_k = Σ_n ϱ_{n+k,n} for k ≥ 0 and Ψ_{−k} = Ψ_k*.
pub fn exact_moments(rho: &DensityMatrix, k: i32) -> Result<Complex64> {
    let order = k.unsigned_abs() as usize;
    if order >= rho.dim() {
        return Err(argument(format!(
            "moment order |k| = {order} must be below the Fock dimension {}",
            rho.dim()
        )));
    }
    let psi: Complex64 = (0..rho.dim() - order).map(|n| rho.element(n + order, n)).sum();
    Ok(if k < 0 { psi.conj() } else { psi })
}

/// N equidistant phases covering [center − π, center + π).
pub fn phase_grid(center: f64, n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..n).map(|j| center - pi + 2.0 * pi * j as f64 / n as f64).collect()
}

/// p(φ) = (2π)^{−1} ⟨φ|ϱ|φ⟩ with |φ⟩ = Σ_n e^{inφ}|n⟩.
pub fn canonical_phase_pdf(rho: &DensityMatrix, phi_grid: &[f64]) -> Vec<f64> {
    let norm = 1.0 / (2.0 * std::f64::consts::PI);
    phi_grid
        .iter()
        .map(|&phi| {
            let w = Complex64::from_polar(1.0, -phi);
            let p: f64 = rho
                .components()
                .iter()
                .map(|c| {
                    // Horner in e^{−iφ}
                    let amp = c
                        .amplitudes
                        .iter()
                        .rev()
                        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * w + a);
                    c.weight * amp.norm_sqr()
                })
                .sum();
            (norm * p).max(0.0)
        })
        .collect()
}
