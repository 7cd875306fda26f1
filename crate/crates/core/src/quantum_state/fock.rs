//! Pure states as truncated Fock-basis vectors.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{argument, Error, Result};

/// Largest probability mass allowed outside the truncated basis.
pub const TAIL_THRESHOLD: f64 = 1e-8;

/// Normalised amplitudes c_0..c_{D−1} in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coefficients: Vec<Complex64>,
}

impl FockVector {
    /// Normalises `coefficients`; fails on an empty or null vector.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(argument("Fock vector needs dimension D ≥ 1"));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(argument("Fock vector has non-finite amplitudes"));
        }
        let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(argument("Fock vector is identically zero"));
        }
        Ok(Self {
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Number state |n⟩ in a basis of dimension `dim`.
    pub fn number(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(argument(format!("number state |{n}⟩ does not fit in dimension {dim}")));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); dim];
        c[n] = Complex64::new(1.0, 0.0);
        Ok(Self { coefficients: c })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn mean_photon(&self) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// ⟨a⟩.
    pub fn mean_amplitude(&self) -> Complex64 {
        self.coefficients
            .windows(2)
            .enumerate()
            .map(|(n, w)| ((n + 1) as f64).sqrt() * w[0].conj() * w[1])
            .sum()
    }
}

/// P(N ≥ dim) for a Poisson variable of mean `lambda`.
fn poisson_tail(lambda: f64, dim: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let ln_l = lambda.ln();
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let term = (-lambda + n as f64 * ln_l - ln_gamma(n as f64 + 1.0)).exp();
        tail += term;
        if (n as f64 > lambda && term < 1e-20 * tail.max(1e-300)) || term == 0.0 && n as f64 > lambda {
            break;
        }
        n += 1;
    }
    tail
}

/// Coherent state |α⟩ truncated to `dim` levels.
///
/// Requires |α|² ≤ dim/4 and a Poisson tail beyond the basis below 1e-8.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(argument("Fock dimension must be at least 1"));
    }
    let n_mean = alpha.norm_sqr();
    let fits = |d: usize| n_mean <= d as f64 / 4.0 && poisson_tail(n_mean, d) < TAIL_THRESHOLD;
    if !fits(dim) {
        let required_dim = (dim..).find(|&d| fits(d)).expect("some dimension always fits");
        return Err(Error::Truncation {
            tail: poisson_tail(n_mean, dim),
            required_dim,
        });
    }
    let (r, phase) = alpha.to_polar();
    let coefficients = (0..dim)
        .map(|n| {
            let nf = n as f64;
            let log_mod = if r == 0.0 {
                if n == 0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            } else {
                -0.5 * n_mean + nf * r.ln() - 0.5 * ln_gamma(nf + 1.0)
            };
            Complex64::from_polar(log_mod.exp(), nf * phase)
        })
        .collect();
    FockVector::new(coefficients)
}

/// Displaced squeezed state D(α) S(ξ)|0⟩ with |ξ| = ln(s)/2, oriented so the
/// quadrature orthogonal to α is squeezed for s > 1 (phase squeezing).
///
/// Amplitudes follow from (μ a + ν a†)|ψ⟩ = γ|ψ⟩ with μ = cosh r,
/// ν = e^{iθ} sinh r, γ = μα + να*:
/// c_{n+1} = (γ c_n − ν √n c_{n−1}) / (μ √(n+1)),
/// c_0 = μ^{−1/2} exp(−|α|²/2 − ν α*² / (2μ)).
pub fn squeezed_coherent_state(alpha: Complex64, s: f64, dim: usize) -> Result<FockVector> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(argument(format!("squeeze parameter s = {s} must be positive")));
    }
    if dim == 0 {
        return Err(argument("Fock dimension must be at least 1"));
    }
    let r = 0.5 * s.ln();
    let theta = 2.0 * alpha.arg() + std::f64::consts::PI;
    let mu = r.cosh();
    let nu = Complex64::from_polar(r.sinh(), theta);
    let gamma = mu * alpha + nu * alpha.conj();
    let c0 = (-0.5 * alpha.norm_sqr() - nu * alpha.conj() * alpha.conj() / (2.0 * mu)).exp() / mu.sqrt();

    // run past `dim` to locate the dimension the tail criterion needs
    let search = (4 * dim).max(dim + 256);
    let mut c = Vec::with_capacity(search);
    c.push(c0);
    for n in 0..search - 1 {
        let prev = if n == 0 { Complex64::new(0.0, 0.0) } else { c[n - 1] };
        let next = (gamma * c[n] - nu * (n as f64).sqrt() * prev) / (mu * ((n + 1) as f64).sqrt());
        c.push(next);
    }
    let mut inside = 0.0_f64;
    let mut tails = Vec::with_capacity(search);
    for v in &c {
        tails.push((1.0 - inside).max(0.0));
        inside += v.norm_sqr();
    }
    let tail = tails[dim];
    if tail >= TAIL_THRESHOLD {
        let required_dim = tails.iter().position(|&t| t < TAIL_THRESHOLD).unwrap_or(search);
        return Err(Error::Truncation { tail, required_dim });
    }
    c.truncate(dim);
    FockVector::new(c)
}
