//! Tabulated kernels with a classical continuation beyond the crossover.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, numerical, Result};
use crate::kernels::eval::{classical_log_slope, kernel_classical, KernelEvaluator};
use crate::kernels::quadrature::{integrate, Tolerance};
use crate::quantum_state::hermite::psi_sequence;

/// Largest |k| for which tables are built.
pub const MAX_TABLE_ORDER: u32 = 8;

/// Construction parameters of a [`KernelTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableParams {
    /// X_c: the exact kernel is tabulated on [−X_c, X_c].
    pub crossover_x: f64,
    /// Grid spacing of the tabulation.
    pub spacing: f64,
    /// Absolute tolerance of each kernel evaluation.
    pub abs_tol: f64,
    /// Lower edge of the window 4 ≤ |x| ≤ X_c used to fit C_{2m}.
    pub fit_from: f64,
}

impl Default for TableParams {
    fn default() -> Self {
        Self {
            crossover_x: 10.0,
            spacing: 0.02,
            abs_tol: 1e-6,
            fit_from: 4.0,
        }
    }
}

impl TableParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.crossover_x > self.fit_from && self.fit_from > 0.0) {
            return Err(argument(format!(
                "kernel crossover X_c = {} must exceed the fit start {}",
                self.crossover_x, self.fit_from
            )));
        }
        if !(self.spacing > 0.0 && self.spacing <= 0.1) {
            return Err(argument(format!(
                "kernel grid spacing {} outside (0, 0.1]",
                self.spacing
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-4) {
            return Err(argument(format!("kernel tolerance {} outside (0, 1e-4]", self.abs_tol)));
        }
        Ok(())
    }

    /// Number of nonnegative grid points, 0..=X_c.
    fn half_points(&self) -> usize {
        (self.crossover_x / self.spacing).round() as usize + 1
    }
}

/// K_k(x) tabulated on a uniform grid over [−X_c, X_c], with the classical
/// asymptote beyond.
#[derive(Debug, Clone)]
pub struct KernelTable {
    k: i32,
    grid_min: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    asymptote_constant: f64,
    crossover_x: f64,
}

impl KernelTable {
    /// Assembles a table from stored nonnegative-half values; checks parity
    /// layout and finiteness.
    pub fn from_values(k: i32, crossover_x: f64, values: Vec<f64>, asymptote_constant: f64) -> Result<Self> {
        let order = k.unsigned_abs();
        if order == 0 || order > MAX_TABLE_ORDER {
            return Err(argument(format!(
                "kernel table order |k| = {order} outside 1..={MAX_TABLE_ORDER}"
            )));
        }
        if values.len() < 5 || values.len().is_multiple_of(2) {
            return Err(argument(
                "kernel table needs an odd number (≥ 5) of symmetric grid points",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(numerical(format!(
                "kernel table for k = {k} contains non-finite values"
            )));
        }
        if order % 2 == 1 && asymptote_constant != 0.0 {
            return Err(argument("odd kernels carry no asymptote constant"));
        }
        let n = values.len();
        let step = 2.0 * crossover_x / (n - 1) as f64;
        let slopes = node_slopes(&values, step);
        Ok(Self {
            k,
            grid_min: -crossover_x,
            step,
            values,
            slopes,
            asymptote_constant,
            crossover_x,
        })
    }

    /// Moment order this table was built for (sign preserved).
    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.k.unsigned_abs()
    }

    pub fn crossover_x(&self) -> f64 {
        self.crossover_x
    }

    /// C_{2m} for even orders, 0 for odd orders.
    pub fn asymptote_constant(&self) -> f64 {
        self.asymptote_constant
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn x_grid(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| self.grid_min + i as f64 * self.step)
            .collect()
    }

    pub fn grid_min(&self) -> f64 {
        self.grid_min
    }

    pub fn grid_max(&self) -> f64 {
        self.crossover_x
    }

    /// K_k(x): cubic Hermite interpolation inside the grid,
    /// classical continuation outside.
    pub fn lookup(&self, x: f64) -> f64 {
        if x.abs() > self.crossover_x {
            return kernel_classical(self.k, x, self.asymptote_constant).unwrap_or(0.0);
        }
        let pos = (x - self.grid_min) / self.step;
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let t = pos - i as f64;
        let h = self.step;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * d1
    }

    /// The same table with every value scaled; used to probe the defining
    /// property's sensitivity.
    pub fn scaled(&self, factor: f64) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        let mut t = Self::from_values(self.k, self.crossover_x, values, 0.0).expect("scaling keeps a valid table");
        t.asymptote_constant = self.asymptote_constant * factor;
        t
    }
}

// Fritsch–Carlson derivative estimates.
/// Derivatives at the nodes from fourth-order finite differences (one-sided
/// stencils at the two ends of the grid).
fn node_slopes(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) / (12.0 * h);
    d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / (12.0 * h);
    d
}

/// Tabulates K_k on [−X_c, X_c] (parity fills the negative half), fits the
/// even-order constant and attaches the classical continuation.
pub fn build_kernel_table(k: i32, params: &TableParams) -> Result<KernelTable> {
    params.validate()?;
    let order = k.unsigned_abs();
    if order == 0 || order > MAX_TABLE_ORDER {
        return Err(argument(format!(
            "kernel table order |k| = {order} outside 1..={MAX_TABLE_ORDER}"
        )));
    }
    let evaluator = KernelEvaluator::with_tolerance(order as i32, params.abs_tol)?;
    let half = params.half_points();
    let step = params.crossover_x / (half - 1) as f64;
    let positive: Vec<f64> = (0..half)
        .into_par_iter()
        .map(|i| evaluator.evaluate(i as f64 * step))
        .collect::<Result<_>>()?;
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut values: Vec<f64> = positive.iter().skip(1).rev().map(|v| sign * v).collect();
    values.extend_from_slice(&positive);

    let constant = if order.is_multiple_of(2) {
        let fit = fit_log_asymptote(k, &positive, step, params.fit_from)?;
        if fit.max_residual > 1e-3 {
            return Err(numerical(format!(
                "K_{order}: log-asymptote fit residual {:.3e} exceeds 1e-3 on [{}, {}]; increase X_c",
                fit.max_residual, params.fit_from, params.crossover_x
            )));
        }
        fit.constant
    } else {
        0.0
    };
    KernelTable::from_values(k, params.crossover_x, values, constant)
}

#[derive(Debug, Clone, Copy)]
pub struct LogFit {
    pub constant: f64,
    /// Coefficient of the 1/x² approach term.
    pub correction: f64,
    /// Largest |K − (slope ln x + C)| over the fit window.
    pub max_residual: f64,
}

/// Least-squares fit of K(x) ≈ slope·ln x + C + d/x² over fit_from ≤ x ≤ X_c,
/// slope fixed at its classical value.
fn fit_log_asymptote(k: i32, positive: &[f64], step: f64, fit_from: f64) -> Result<LogFit> {
    let slope = classical_log_slope(k);
    let pts: Vec<(f64, f64)> = positive
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 * step, v))
        .filter(|&(x, _)| x >= fit_from - 1e-12)
        .map(|(x, v)| (1.0 / (x * x), v - slope * x.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(argument("too few grid points in the asymptote fit window"));
    }
    let n = pts.len() as f64;
    let mu = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mr = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let suu: f64 = pts.iter().map(|p| (p.0 - mu).powi(2)).sum();
    let sur: f64 = pts.iter().map(|p| (p.0 - mu) * (p.1 - mr)).sum();
    let correction = sur / suu;
    let constant = mr - correction * mu;
    let max_residual = pts.iter().map(|p| (p.1 - constant).abs()).fold(0.0, f64::max);
    Ok(LogFit {
        constant,
        correction,
        max_residual,
    })
}

/// Residuals |2π ∫ K_k(x) ψ_{n+|k|}(x) ψ_n(x) dx − 1| for n = 0..=n_max.
///
/// The integral runs over the table (five-point Gauss–Legendre per grid
/// cell, through the interpolant) and over the classical continuation out to
/// where the oscillator functions have decayed.
pub fn verify_integral_equation(table: &KernelTable, n_max: usize) -> Result<Vec<f64>> {
    let order = table.order() as usize;
    let turning = ((2 * (n_max + order) + 1) as f64).sqrt();
    if table.crossover_x() < turning {
        return Err(argument(format!(
            "table range X_c = {} does not cover the oscillator support |x| ≤ {turning:.3} needed for n ≤ {n_max}",
            table.crossover_x()
        )));
    }
    let top = n_max + order;
    let weight = |x: f64| -> Vec<f64> {
        let psi = psi_sequence(top, x);
        let kv = table.lookup(x);
        (0..=n_max).map(|n| kv * psi[n] * psi[n + order]).collect()
    };

    const GL_X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const GL_W: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    let grid = table.x_grid();
    let mut sums = grid
        .par_windows(2)
        .map(|w| {
            let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            let mut acc = vec![0.0; n_max + 1];
            for (gx, gw) in GL_X.iter().zip(GL_W) {
                for (a, v) in acc.iter_mut().zip(weight(c + h * gx)) {
                    *a += gw * h * v;
                }
            }
            acc
        })
        .reduce(
            || vec![0.0; n_max + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    // classical tails on both sides
    let x_c = table.crossover_x();
    let far = x_c.max(turning) + 14.0;
    let tol = Tolerance {
        abs: 1e-12,
        rel: 1e-10,
        max_intervals: 4000,
    };
    let breaks: Vec<f64> = (0..=16).map(|i| x_c + (far - x_c) * i as f64 / 16.0).collect();
    for (n, s) in sums.iter_mut().enumerate() {
        let tail = |x: f64| {
            let psi = psi_sequence(top, x);
            let kc = |y: f64| table.lookup(y);
            (kc(x) + kc(-x) * if order.is_multiple_of(2) { 1.0 } else { -1.0 }) * psi[n] * psi[n + order]
        };
        *s += integrate(tail, &breaks, tol)?.value;
    }
    Ok(sums
        .iter()
        .map(|s| (2.0 * std::f64::consts::PI * s - 1.0).abs())
        .collect())
}
