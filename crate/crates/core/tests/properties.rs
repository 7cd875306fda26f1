mod common;

use canphase::estimator::{phase_stats, MomentEstimate};
use canphase::quantum_state::{coherent_state, exact_moments, DensityMatrix, FockVector};
use canphase::simulator::{allocate_events, AllocationStrategy};
use num_complex::Complex64;
use proptest::prelude::*;

fn fock_vector(dim: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| FockVector::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moments_of_any_state_are_bounded(a in fock_vector(12), b in fock_vector(12), w in 0.0..1.0f64, k in 1i32..8) {
        let rho = DensityMatrix::mixture(&[(w, a), (1.0 - w, b)]).unwrap();
        let psi = exact_moments(&rho, k).unwrap();
        prop_assert!(psi.norm() <= 1.0 + 1e-12);
        prop_assert_eq!(exact_moments(&rho, -k).unwrap(), psi.conj());
    }

    #[test]
    fn phase_stats_definitions(r in 1e-6..1.0f64, phi in -3.1..3.1f64, se in 0.0..0.05f64) {
        let e = MomentEstimate { k: 1, value: Complex64::from_polar(r, phi), stderr_re: se, stderr_im: se, cov_re_im: 0.0, n_events_used: 1 };
        let s = phase_stats(&e).unwrap();
        prop_assert!((s.mean_phase - phi).abs() < 1e-12);
        prop_assert!(s.delta_phi >= 0.0 && s.delta_phi <= std::f64::consts::FRAC_PI_2);
        prop_assert_eq!(s.sigma_bp, s.delta_phi.sin());
        prop_assert_eq!(s.sigma_h, s.delta_phi.tan());
        prop_assert!(s.mean_phase_err >= 0.0);
    }

    #[test]
    fn allocation_preserves_budget(extra in 0usize..20_000, n_theta in 1usize..60, abs in 0.0..4.0f64, arg in -3.0..3.0f64) {
        let rho = DensityMatrix::from_pure(&coherent_state(Complex64::from_polar(abs, arg), 80).unwrap());
        let total = n_theta + extra;
        for strategy in [AllocationStrategy::Uniform, AllocationStrategy::Psi1Optimal { min_events: 5, max_events: 500 }] {
            let s = allocate_events(total, &rho, n_theta, strategy).unwrap();
            s.validate().unwrap();
            prop_assert_eq!(s.total(), total);
            if let AllocationStrategy::Psi1Optimal { min_events, max_events } = strategy {
                if total >= n_theta * min_events && total <= n_theta * max_events {
                    prop_assert!(s.counts.iter().all(|&c| (min_events..=max_events).contains(&c)), "{:?}", s.counts);
                }
            }
        }
    }

    #[test]
    fn kernel_lookup_parity(x in -14.0..14.0f64, k in 1usize..=8) {
        let t = common::kernel_set().table(k).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((t.lookup(-x) - sign * t.lookup(x)).abs() < 1e-8);
        prop_assert!(t.lookup(x).is_finite() || (k % 2 == 0 && x == 0.0));
    }
}
