use std::f64::consts::PI;

use canphase::quantum_state::{coherent_state, DensityMatrix, FockVector};
use canphase::simulator::{
    allocate_events, equidistant_phases, sample_double_homodyne, AllocationStrategy, DoubleHomodyneDataset,
    HomodyneDataset, QuadratureModel, DEFAULT_X_POINTS,
};
use num_complex::Complex64;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use statrs::function::erf::erf;

fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max((c - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// 1.63/√n: the KS critical value at the 1% level.
fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

#[test]
fn coherent_quadratures_are_gaussian() {
    let alpha = Complex64::from_polar(2.0, 0.9);
    let rho = DensityMatrix::from_pure(&coherent_state(alpha, 60).unwrap());
    let model = QuadratureModel::new(&rho, 8, DEFAULT_X_POINTS).unwrap();
    let schedule = model.allocate(8 * 20_000, AllocationStrategy::Uniform).unwrap();
    let data = model.sample(&schedule, 3, "coherent").unwrap();
    for (theta, group) in data.thetas.iter().zip(&data.groups) {
        let mean = 2f64.sqrt() * 2.0 * (theta - 0.9).cos();
        let normal = Normal::new(mean, 0.5f64.sqrt()).unwrap();
        let d = ks_distance(group.clone(), |x| normal.cdf(x));
        assert!(d < ks_critical(group.len()), "θ = {theta}: KS {d}");
    }
}

#[test]
fn single_photon_quadratures() {
    // p(x) = 2x² e^{−x²}/√π, F(x) = (1 + erf x)/2 − x e^{−x²}/√π, for every θ
    let rho = DensityMatrix::from_pure(&FockVector::number(1, 10).unwrap());
    let model = QuadratureModel::new(&rho, 3, DEFAULT_X_POINTS).unwrap();
    let schedule = model.allocate(3 * 30_000, AllocationStrategy::Uniform).unwrap();
    let data = model.sample(&schedule, 9, "fock1").unwrap();
    let cdf = |x: f64| 0.5 * (1.0 + erf(x)) - x * (-x * x).exp() / PI.sqrt();
    for group in &data.groups {
        let d = ks_distance(group.clone(), cdf);
        assert!(d < ks_critical(group.len()), "KS {d}");
    }
}

#[test]
fn double_homodyne_vacuum_chi_square() {
    // Q(β) = e^{−|β|²}/π: |β|² ~ Exp(1), arg β uniform
    let rho = DensityMatrix::from_pure(&FockVector::vacuum(8).unwrap());
    let data = sample_double_homodyne(&rho, 50_000, 17, "vacuum").unwrap();
    let bins = 20;
    let mut radial = vec![0usize; bins];
    let mut angular = vec![0usize; bins];
    for b in &data.betas {
        let u = 1.0 - (-b.norm_sqr()).exp();
        radial[((u * bins as f64) as usize).min(bins - 1)] += 1;
        let a = (b.arg() + PI) / (2.0 * PI);
        angular[((a * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let expected = data.betas.len() as f64 / bins as f64;
    let chi = |h: &[usize]| h.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum::<f64>();
    let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(chi(&radial) < critical, "radial χ² {}", chi(&radial));
    assert!(chi(&angular) < critical, "angular χ² {}", chi(&angular));
}

#[test]
fn double_homodyne_coherent_displacement() {
    let alpha = Complex64::from_polar(3.0, -0.7);
    let rho = DensityMatrix::from_pure(&coherent_state(alpha, 80).unwrap());
    let data = sample_double_homodyne(&rho, 20_000, 5, "coherent").unwrap();
    let xs: Vec<f64> = data.betas.iter().map(|b| (b - alpha).norm_sqr()).collect();
    let d = ks_distance(xs, |s| 1.0 - (-s).exp());
    assert!(d < ks_critical(data.betas.len()), "KS {d}");
    assert_eq!(data.stats.envelope_violations, 0);
    assert!(data.stats.acceptance_rate() > 1e-4);
}

#[test]
fn sampling_is_reproducible() {
    let rho = DensityMatrix::from_pure(&coherent_state(Complex64::new(1.5, 0.5), 40).unwrap());
    let model = QuadratureModel::new(&rho, 5, DEFAULT_X_POINTS).unwrap();
    let schedule = model.allocate(500, AllocationStrategy::Uniform).unwrap();
    let a = model.sample(&schedule, 42, "x").unwrap();
    let b = model.sample(&schedule, 42, "x").unwrap();
    let c = model.sample(&schedule, 43, "x").unwrap();
    assert_eq!(a, b);
    assert_ne!(a.groups, c.groups);
    assert_eq!(HomodyneDataset::from_json(&a.to_json().unwrap()).unwrap(), a);

    let q1 = sample_double_homodyne(&rho, 300, 42, "x").unwrap();
    let q2 = sample_double_homodyne(&rho, 300, 42, "x").unwrap();
    assert_eq!(q1, q2);
    assert_eq!(DoubleHomodyneDataset::from_json(&q1.to_json().unwrap()).unwrap(), q1);
}

#[test]
fn allocation_rules() {
    let rho = DensityMatrix::from_pure(&coherent_state(Complex64::from_polar(5.0, 0.6), 160).unwrap());
    let uniform = allocate_events(1000, &rho, 41, AllocationStrategy::Uniform).unwrap();
    assert_eq!(uniform.total(), 1000);
    let (lo, hi) = (
        uniform.counts.iter().min().unwrap(),
        uniform.counts.iter().max().unwrap(),
    );
    assert!(hi - lo <= 1);
    assert_eq!(uniform.thetas, equidistant_phases(41));

    let clamped = allocate_events(6020, &rho, 41, AllocationStrategy::reference()).unwrap();
    clamped.validate().unwrap();
    assert_eq!(clamped.total(), 6020);
    assert_eq!(*clamped.counts.iter().min().unwrap(), 10);
    assert_eq!(*clamped.counts.iter().max().unwrap(), 800);
    let again = allocate_events(6020, &rho, 41, AllocationStrategy::reference()).unwrap();
    assert_eq!(clamped, again);
    // more events go where the quadrature density sits near x = 0
    let model = QuadratureModel::new(&rho, 41, DEFAULT_X_POINTS).unwrap();
    let near: Vec<usize> = model
        .pdfs()
        .iter()
        .map(|p| p.mode().abs() < 1.0)
        .zip(&clamped.counts)
        .filter(|(n, _)| *n)
        .map(|(_, &c)| c)
        .collect();
    assert!(near.iter().all(|&c| c >= 400), "{near:?}");

    let one_each = allocate_events(41, &rho, 41, AllocationStrategy::reference()).unwrap();
    assert!(one_each.counts.iter().all(|&c| c == 1));
    assert!(allocate_events(40, &rho, 41, AllocationStrategy::Uniform).is_err());
}
