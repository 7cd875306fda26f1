//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{numerical, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over consecutive breakpoints, bisecting the worst segment
/// until the summed error estimate meets `max(abs, rel * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], tol: Tolerance) -> Result<QuadResult> {
    if breakpoints.len() < 2 {
        return Err(numerical("quadrature needs at least two breakpoints"));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod15(&f, w[0], w[1]));
            evaluations += 15;
        }
    }
    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(numerical(format!(
                "non-finite integrand encountered on [{}, {}]",
                breakpoints[0],
                breakpoints[breakpoints.len() - 1]
            )));
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(QuadResult {
                value,
                abs_error: error,
                evaluations,
                intervals: heap.len(),
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(numerical(format!(
                "adaptive quadrature did not converge: estimate {value:.6e}, error {error:.3e}, {} intervals, {evaluations} evaluations",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(numerical(format!(
                "quadrature segment [{}, {}] cannot be bisected further",
                worst.a, worst.b
            )));
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], Tolerance::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn inverse_sqrt_singularity_converges() {
        let r = integrate(
            |x| 1.0 / x.sqrt(),
            &[0.0, 1.0],
            Tolerance {
                abs: 1e-9,
                rel: 1e-9,
                max_intervals: 5000,
            },
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn reports_non_convergence() {
        let tol = Tolerance {
            abs: 1e-15,
            rel: 0.0,
            max_intervals: 3,
        };
        assert!(integrate(|x| (50.0 * x).sin(), &[0.0, 10.0], tol).is_err());
    }
}
