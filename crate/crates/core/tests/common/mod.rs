#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::OnceLock;

use canphase::estimator::KernelSet;
use canphase::kernels::{kummer_phi, load_or_build, TableParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::gamma;

pub fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("kernel-cache")
}

/// Default tables for k = 1..=8, loaded once per test binary.
pub fn kernel_set() -> &'static KernelSet {
    static SET: OnceLock<KernelSet> = OnceLock::new();
    SET.get_or_init(|| {
        let params = TableParams::default();
        let tables = (1..=8)
            .map(|k| load_or_build(&cache_dir(), k, &params).unwrap().0)
            .collect();
        KernelSet::new(tables).unwrap()
    })
}

/// Monte Carlo value of the k-fold kernel integral
///
///   K_k(x) = P_k(x) ∫ d^k t Π_j e^{−j t_j²} B_k(z, x),  z = (e^{−|t|²} − 1)/2,
///
/// with P and B the prefactor and bracket of the odd/even forms. Points are
/// drawn as t = r ω, ω uniform on the sphere and r half-normal with density
/// g(r) ∝ e^{−r²}, so the weight f(t) S_{k−1} r^{k−1} / g(r) stays bounded
/// even where B grows like 1/z. Returns (mean, standard error).
pub fn kernel_monte_carlo(k: u32, x: f64, samples: usize, seed: u64) -> (f64, f64) {
    let m = k / 2;
    let even = k.is_multiple_of(2);
    let prefactor = if even {
        gamma(m as f64 + 1.0) / (2.0 * PI).powi(m as i32 + 1)
    } else {
        2.0 * x * gamma(m as f64 + 2.0) / (2.0 * PI).powf(m as f64 + 1.5)
    };
    // S_{k−1}: surface of the unit sphere in k dimensions
    let sphere = 2.0 * PI.powf(k as f64 / 2.0) / gamma(k as f64 / 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut omega = vec![0.0; k as usize];
    for _ in 0..samples {
        let norm = loop {
            omega.iter_mut().for_each(|w| *w = StandardNormal.sample(&mut rng));
            let n = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
            if n > 0.0 {
                break n;
            }
        };
        let z_std: f64 = StandardNormal.sample(&mut rng);
        let r = z_std.abs() / std::f64::consts::SQRT_2;
        let g = 2.0 / PI.sqrt() * (-r * r).exp();
        let s = r * r;
        let weight_exp: f64 = omega
            .iter()
            .enumerate()
            .map(|(j, w)| (j + 1) as f64 * (r * w / norm).powi(2))
            .sum();
        let z = 0.5 * (-s).exp_m1();
        let onez = 1.0 + z;
        let y = x * x * z / onez;
        let bracket = if even {
            let phi = kummer_phi(m + 1, 0.5, y).unwrap();
            (phi / onez.powi(m as i32 + 1) - 1.0) / z.powi(m as i32)
        } else {
            kummer_phi(m + 2, 1.5, y).unwrap() / (z.powi(m as i32) * onez.powi(m as i32 + 2))
        };
        let v = prefactor * (-weight_exp).exp() * bracket * sphere * r.powi(k as i32 - 1) / g;
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Uniform draws helper for tests that want plain U(0,1) values.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}
