//! Direct-sampling estimate of Ψ_k from grouped homodyne data:
//! Ψ̂_k = (2π/N_ϑ) Σ_j e^{ikϑ_j} (1/N_j) Σ_i K_k(x_ji).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::kernels::KernelTable;
use crate::simulator::HomodyneDataset;

/// Ψ̂_k with standard errors of its real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: i32,
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// Covariance of the real and imaginary parts.
    pub cov_re_im: f64,
    pub n_events_used: usize,
}

impl MomentEstimate {
    /// The estimate of Ψ_{−k} = Ψ_k*.
    pub fn mirrored(&self) -> Self {
        Self {
            k: -self.k,
            value: self.value.conj(),
            cov_re_im: -self.cov_re_im,
            ..*self
        }
    }

    /// Variance of the projection of the estimate onto the unit direction e^{iφ}.
    pub fn projected_variance(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        c * c * self.stderr_re.powi(2) + 2.0 * s * c * self.cov_re_im + s * s * self.stderr_im.powi(2)
    }
}

/// Kernel tables for orders 1..=k_max.
#[derive(Debug, Clone)]
pub struct KernelSet {
    tables: Vec<KernelTable>,
}

impl KernelSet {
    /// `tables` must hold orders 1, 2, …, k_max in sequence.
    pub fn new(tables: Vec<KernelTable>) -> Result<Self> {
        for (i, t) in tables.iter().enumerate() {
            if t.order() as usize != i + 1 {
                return Err(argument(format!("kernel set slot {} holds order {}", i + 1, t.order())));
            }
        }
        Ok(Self { tables })
    }

    pub fn k_max(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, k: usize) -> Option<&KernelTable> {
        self.tables.get(k.wrapping_sub(1))
    }

    pub fn tables(&self) -> &[KernelTable] {
        &self.tables
    }
}

/// Running mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    fn variance(&self) -> Option<f64> {
        (self.n >= 2).then(|| self.m2 / (self.n - 1) as f64)
    }
}

/// Streaming accumulator: one writer per group, merge at read.
///
/// Groups with fewer than two events have no sample variance; their
/// variance is replaced by the variance of K_k pooled over every event.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    thetas: Vec<f64>,
    k_max: usize,
    /// stats[j][k − 1]
    stats: Vec<Vec<Running>>,
}

impl MomentAccumulator {
    pub fn new(thetas: &[f64], k_max: usize) -> Result<Self> {
        if thetas.is_empty() || k_max == 0 {
            return Err(argument("accumulator needs at least one phase and one moment order"));
        }
        Ok(Self {
            thetas: thetas.to_vec(),
            k_max,
            stats: vec![vec![Running::default(); k_max]; thetas.len()],
        })
    }

    /// Adds one quadrature sample recorded at phase index `group`.
    pub fn push(&mut self, group: usize, x: f64, kernels: &KernelSet) -> Result<()> {
        if kernels.k_max() < self.k_max {
            return Err(argument(format!(
                "kernel set covers k ≤ {}, need {}",
                kernels.k_max(),
                self.k_max
            )));
        }
        let row = self
            .stats
            .get_mut(group)
            .ok_or_else(|| argument(format!("no LO phase with index {group}")))?;
        for (r, t) in row.iter_mut().zip(kernels.tables()) {
            r.push(t.lookup(x));
        }
        Ok(())
    }

    /// Combines the statistics of an accumulator over the same phases.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.thetas != self.thetas || other.k_max != self.k_max {
            return Err(argument("cannot merge accumulators over different phases or orders"));
        }
        for (a, b) in self.stats.iter_mut().zip(&other.stats) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
        Ok(())
    }

    pub fn events(&self) -> usize {
        self.stats.iter().map(|row| row[0].n).sum()
    }

    /// Current estimates for k = 1..=k_max.
    pub fn estimates(&self) -> Result<Vec<MomentEstimate>> {
        if let Some(j) = self.stats.iter().position(|row| row[0].n == 0) {
            return Err(argument(format!("LO phase {j} has no events")));
        }
        let weight = 2.0 * PI / self.thetas.len() as f64;
        let total = self.events();
        Ok((1..=self.k_max)
            .map(|k| {
                let mut pooled = Running::default();
                self.stats.iter().for_each(|row| pooled.merge(&row[k - 1]));
                let fallback = pooled.variance().unwrap_or(0.0);
                let mut value = Complex64::new(0.0, 0.0);
                let (mut var_re, mut var_im, mut cov) = (0.0, 0.0, 0.0);
                for (row, &theta) in self.stats.iter().zip(&self.thetas) {
                    let r = &row[k - 1];
                    let (s, c) = (k as f64 * theta).sin_cos();
                    value += Complex64::new(c, s) * r.mean;
                    let v = r.variance().unwrap_or(fallback) / r.n as f64;
                    var_re += c * c * v;
                    var_im += s * s * v;
                    cov += s * c * v;
                }
                MomentEstimate {
                    k: k as i32,
                    value: value * weight,
                    stderr_re: weight * var_re.sqrt(),
                    stderr_im: weight * var_im.sqrt(),
                    cov_re_im: weight * weight * cov,
                    n_events_used: total,
                }
            })
            .collect())
    }
}

/// Ψ̂_k for k = 1..=k_max from a homodyne dataset.
pub fn sample_moments(data: &HomodyneDataset, kernels: &KernelSet, k_max: usize) -> Result<Vec<MomentEstimate>> {
    if k_max == 0 || k_max > kernels.k_max() {
        return Err(argument(format!(
            "k_max = {k_max} not covered by kernel tables (k ≤ {})",
            kernels.k_max()
        )));
    }
    if data.groups.len() != data.thetas.len() {
        return Err(argument("dataset has mismatched phases and groups"));
    }
    if let Some(j) = data.groups.iter().position(Vec::is_empty) {
        return Err(argument(format!("LO phase group {j} is empty")));
    }
    let mut acc = MomentAccumulator::new(&data.thetas, k_max)?;
    for (j, group) in data.groups.iter().enumerate() {
        for &x in group {
            acc.push(j, x, kernels)?;
        }
    }
    acc.estimates()
}

/// Estimates for k = −k_max..=k_max, with k = 0 fixed at 1 and negative
/// orders mirrored from positive ones.
pub fn with_negative_orders(positive: &[MomentEstimate]) -> Vec<MomentEstimate> {
    let n = positive.first().map(|e| e.n_events_used).unwrap_or(0);
    let zero = MomentEstimate {
        k: 0,
        value: Complex64::new(1.0, 0.0),
        stderr_re: 0.0,
        stderr_im: 0.0,
        cov_re_im: 0.0,
        n_events_used: n,
    };
    positive
        .iter()
        .rev()
        .map(MomentEstimate::mirrored)
        .chain(std::iter::once(zero))
        .chain(positive.iter().copied())
        .collect()
}
