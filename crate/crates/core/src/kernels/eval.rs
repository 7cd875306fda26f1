//! Evaluation of the sampling kernels K_k(x) and their classical limits.
//!
//! The k-fold t-integrals depend on the t_j only through S = Σ t_j², through
//! z = (e^{−S} − 1)/2. Writing the Gaussian weight as (total mass) × (density
//! of S) turns each kernel into a one-dimensional integral
//!
//! ```text
//! K_k(x) = P_k(x) · W_k · ∫_0^∞ f_k(s) g_k(z(s), x) ds,   W_k = Π_j √(π/j)
//! even k = 2m:   P = m! / (2π)^{m+1}
//!                g = Φ(m+1, 1/2, x² z/(1+z)) / (z^m (1+z)^{m+1}) − z^{−m}
//! odd k = 2m+1:  P = 2x (m+1)! / (2π)^{m+3/2}
//!                g = Φ(m+2, 3/2, x² z/(1+z)) / (z^m (1+z)^{m+2})
//! ```
//!
//! The integral is taken in u = √s. Below `s < SERIES_SWITCH` the bracket is
//! expanded in powers of z, so the cancelling z^{−m} pole of the even kernel
//! never has to be subtracted numerically.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{argument, Error, Result};
use crate::kernels::kummer::kummer_unchecked;
use crate::kernels::mixing::MixingSeries;
use crate::kernels::quadrature::{integrate, Tolerance};

/// Largest order the evaluator accepts (K_9 is the odd kernel with m = 4).
pub const MAX_KERNEL_ORDER: u32 = 9;

/// s below which the bracket is evaluated from its z-expansion.
pub const SERIES_SWITCH: f64 = 1e-3;

/// Terms kept beyond the leading z^{−m} in the small-z expansion.
const SERIES_EXTRA_TERMS: usize = 16;

/// Smallest u at which the integrand is sampled; the integrand is bounded there.
const U_FLOOR: f64 = 1e-10;

/// Evaluates K_k(x) for one fixed order.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    order: u32,
    series: MixingSeries,
    log_scale: f64,
    abs_tol: f64,
}

impl KernelEvaluator {
    /// Evaluator for K_{|k|} with absolute tolerance 1e-6.
    pub fn new(k: i32) -> Result<Self> {
        Self::with_tolerance(k, 1e-6)
    }

    pub fn with_tolerance(k: i32, abs_tol: f64) -> Result<Self> {
        let order = k.unsigned_abs();
        if order == 0 || order > MAX_KERNEL_ORDER {
            return Err(argument(format!(
                "kernel order |k| = {order} outside 1..={MAX_KERNEL_ORDER}"
            )));
        }
        let series = MixingSeries::new(order)?;
        let m = (order / 2) as f64;
        // ln of W_k times the x-independent part of P_k
        let log_scale = series.log_weight()
            + if order.is_multiple_of(2) {
                ln_gamma(m + 1.0) - (m + 1.0) * (2.0 * PI).ln()
            } else {
                ln_gamma(m + 2.0) - (m + 1.5) * (2.0 * PI).ln() + 2f64.ln()
            };
        Ok(Self {
            order,
            series,
            log_scale,
            abs_tol,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn is_even(&self) -> bool {
        self.order.is_multiple_of(2)
    }

    fn half(&self) -> u32 {
        self.order / 2
    }

    /// K_k(x).
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(argument(format!("kernel argument x = {x} is not finite")));
        }
        if !self.is_even() && x == 0.0 {
            return Ok(0.0);
        }
        let scale = self.log_scale.exp() * if self.is_even() { 1.0 } else { x };
        let x2 = x * x;
        let small = SmallZExpansion::new(self, x2);
        let m = self.half() as i32;
        let (a, b, p) = if self.is_even() {
            (self.half() + 1, 0.5, m + 1)
        } else {
            (self.half() + 2, 1.5, m + 2)
        };
        let even = self.is_even();
        let bracket = |s: f64| -> f64 {
            if s < SERIES_SWITCH {
                return small.eval(0.5 * (-s).exp_m1());
            }
            let z = 0.5 * (-s).exp_m1();
            let onez = 1.0 + z;
            let phi = kummer_unchecked(a, b, x2 * z / onez);
            let zm = z.powi(m);
            if even {
                phi / (zm * onez.powi(p)) - 1.0 / zm
            } else {
                phi / (zm * onez.powi(p))
            }
        };
        let integrand = |u: f64| {
            let u = u.max(U_FLOOR);
            let s = u * u;
            2.0 * u * self.series.density(s) * bracket(s)
        };

        let u_max = self.series.s_max().sqrt();
        let mut breaks: Vec<f64> = (0..=8).map(|i| u_max * i as f64 / 8.0).collect();
        breaks.push(SERIES_SWITCH.sqrt());
        if x.abs() > 1.0 {
            for c in [0.5, 1.0, 2.0, 4.0] {
                let u = c / x.abs();
                if u < u_max {
                    breaks.push(u);
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let tol = Tolerance {
            abs: self.abs_tol / scale.abs(),
            rel: 1e-12,
            max_intervals: 4000,
        };
        let result = integrate(integrand, &breaks, tol).map_err(|e| match e {
            Error::Numerical(msg) => Error::Numerical(format!("K_{}({x}): {msg}", self.order)),
            other => other,
        })?;
        Ok(scale * result.value)
    }
}

/// Power series of Φ(a, b, x² z/(1+z)) (1+z)^{−p} in z, used for small |z|.
#[derive(Debug, Clone)]
struct SmallZExpansion {
    coeffs: Vec<f64>,
    /// power of z removed from the series (m).
    shift: i32,
    subtract_one: bool,
}

impl SmallZExpansion {
    fn new(ev: &KernelEvaluator, x2: f64) -> Self {
        let m = ev.half() as usize;
        let (a, b, p) = if ev.is_even() {
            ((m + 1) as f64, 0.5, (m + 1) as f64)
        } else {
            ((m + 2) as f64, 1.5, (m + 2) as f64)
        };
        let len = m + SERIES_EXTRA_TERMS + 1;
        // w = z/(1+z) = z − z² + z³ − …
        let w: Vec<f64> = (0..len)
            .map(|n| {
                if n == 0 {
                    0.0
                } else if n % 2 == 1 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        let mut phi = vec![0.0; len];
        let mut w_pow = vec![0.0; len];
        w_pow[0] = 1.0;
        let mut c = 1.0;
        for n in 0..len {
            for (acc, wp) in phi.iter_mut().zip(&w_pow) {
                *acc += c * wp;
            }
            c *= (a + n as f64) * x2 / ((b + n as f64) * (n as f64 + 1.0));
            w_pow = mul_truncated(&w_pow, &w);
        }
        // (1+z)^{−p} = Σ (−1)^n (p)_n / n! z^n
        let mut binom = vec![0.0; len];
        binom[0] = 1.0;
        for n in 1..len {
            binom[n] = -binom[n - 1] * (p + n as f64 - 1.0) / n as f64;
        }
        Self {
            coeffs: mul_truncated(&phi, &binom),
            shift: m as i32,
            subtract_one: ev.is_even(),
        }
    }

    fn eval(&self, z: f64) -> f64 {
        let start = usize::from(self.subtract_one);
        let mut acc = 0.0;
        for n in (start..self.coeffs.len()).rev() {
            acc = acc * z + self.coeffs[n];
        }
        // acc = Σ_{n ≥ start} h_n z^{n − start}
        acc * z.powi(start as i32 - self.shift)
    }
}

fn mul_truncated(p: &[f64], q: &[f64]) -> Vec<f64> {
    let len = p.len();
    let mut out = vec![0.0; len];
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().take(len - i).enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// K_{2m}(x), 1 ≤ m ≤ 4.
pub fn kernel_even(m: u32, x: f64) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(argument(format!("even kernel index m = {m} outside 1..=4")));
    }
    KernelEvaluator::new(2 * m as i32)?.evaluate(x)
}

/// K_{2m+1}(x), 0 ≤ m ≤ 4.
pub fn kernel_odd(m: u32, x: f64) -> Result<f64> {
    if m > 4 {
        return Err(argument(format!("odd kernel index m = {m} outside 0..=4")));
    }
    KernelEvaluator::new(2 * m as i32 + 1)?.evaluate(x)
}

/// Slope of K_{2m} against ln|x| in the classical limit: (−1)^{m+1} m / π.
pub fn classical_log_slope(k: i32) -> f64 {
    let m = (k.unsigned_abs() / 2) as f64;
    let sign = if (k.unsigned_abs() / 2) % 2 == 1 { 1.0 } else { -1.0 };
    sign * m / PI
}

/// Classical kernel: (1/4)(−1)^m (2m+1) sign(x) for k = 2m+1,
/// (−1)^{m+1} m ln|x| / π + C for k = 2m.
pub fn kernel_classical(k: i32, x: f64, constant: f64) -> Result<f64> {
    let order = k.unsigned_abs();
    if order == 0 {
        return Err(argument("classical kernel undefined for k = 0"));
    }
    let m = order / 2;
    if order % 2 == 1 {
        let sign = if m.is_multiple_of(2) { 0.25 } else { -0.25 };
        Ok(sign
            * order as f64
            * if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            })
    } else if x == 0.0 {
        Err(Error::Domain(format!("classical kernel K^c_{order} diverges at x = 0")))
    } else {
        Ok(classical_log_slope(k) * x.abs().ln() + constant)
    }
}
