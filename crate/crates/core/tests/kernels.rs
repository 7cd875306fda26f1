mod common;

use canphase::kernels::{
    build_kernel_table, classical_log_slope, kernel_classical, load_or_build, verify_integral_equation, CacheStatus,
    KernelEvaluator, KernelTable, TableParams,
};
use canphase::Error;

#[test]
fn reduced_kernel_agrees_with_monte_carlo_of_full_integral() {
    for k in 1..=3u32 {
        let ev = KernelEvaluator::new(k as i32).unwrap();
        for (i, &x) in [0.3, 1.0, 2.5].iter().enumerate() {
            let reduced = ev.evaluate(x).unwrap();
            let (mc, se) = common::kernel_monte_carlo(k, x, 1_000_000, 100 + 10 * k as u64 + i as u64);
            assert!(
                (reduced - mc).abs() < 3.0 * se,
                "K_{k}({x}): reduced {reduced}, MC {mc} ± {se}"
            );
            assert!(
                se < 0.01 * reduced.abs().max(0.1),
                "MC error too large to be informative: {se}"
            );
        }
    }
}

#[test]
fn default_tables_satisfy_integral_equation() {
    let set = common::kernel_set();
    for t in set.tables() {
        let residuals = verify_integral_equation(t, 30).unwrap();
        let worst = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
        assert!(worst < 1e-5, "k = {}: worst residual {worst:e}", t.k());
    }
}

#[test]
fn corrupted_table_shows_in_residuals() {
    let t = &common::kernel_set().tables()[0];
    let bad = t.scaled(1.1);
    let residuals = verify_integral_equation(&bad, 20).unwrap();
    for r in residuals {
        assert!((r - 0.1).abs() < 1e-3, "residual {r}");
    }
}

#[test]
fn parity_and_classical_approach() {
    let set = common::kernel_set();
    for t in set.tables() {
        let k = t.k();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..400 {
            let x = 0.025 * i as f64;
            assert!((t.lookup(-x) - sign * t.lookup(x)).abs() < 1e-8);
        }
        for i in 0..=120 {
            let x = 4.0 + 0.05 * i as f64;
            let c = kernel_classical(k, x, t.asymptote_constant()).unwrap();
            assert!(
                (t.lookup(x) - c).abs() < 1e-3,
                "k = {k}, x = {x}: {} vs {c}",
                t.lookup(x)
            );
        }
    }
}

#[test]
fn classical_constants_and_slopes() {
    assert_eq!(classical_log_slope(1), 0.0);
    assert!((classical_log_slope(2) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    assert!((classical_log_slope(4) + 2.0 / std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(kernel_classical(3, -5.0, 0.0).unwrap(), 0.75);
    assert!(matches!(kernel_classical(2, 0.0, 0.3), Err(Error::Domain(_))));
}

#[test]
fn table_lookup_matches_direct_evaluation() {
    let t = &common::kernel_set().tables()[1];
    let ev = KernelEvaluator::new(2).unwrap();
    for &x in &[0.013, 0.517, 1.333, 3.271, 7.77] {
        assert!((t.lookup(x) - ev.evaluate(x).unwrap()).abs() < 1e-7, "x = {x}");
    }
}

#[test]
fn cache_rebuilds_corrupted_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = TableParams {
        spacing: 0.05,
        ..TableParams::default()
    };
    let (built, s) = load_or_build(dir.path(), 1, &params).unwrap();
    assert_eq!(s, CacheStatus::Built);
    let (_, s) = load_or_build(dir.path(), 1, &params).unwrap();
    assert_eq!(s, CacheStatus::Loaded);
    let path = dir.path().join("kernel_k1.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let i = text.find("\"values\":[").unwrap() + 12;
    let mut bytes = text.into_bytes();
    bytes[i] = if bytes[i] == b'1' { b'2' } else { b'1' };
    std::fs::write(&path, bytes).unwrap();
    let (rebuilt, s) = load_or_build(dir.path(), 1, &params).unwrap();
    assert_eq!(s, CacheStatus::Rebuilt);
    assert_eq!(rebuilt.values(), built.values());
}

#[test]
fn rejects_bad_orders() {
    assert!(KernelEvaluator::new(0).is_err());
    assert!(build_kernel_table(9, &TableParams::default()).is_err());
    assert!(KernelTable::from_values(1, 10.0, vec![0.0; 4], 0.0).is_err());
    assert!(KernelTable::from_values(1, 10.0, vec![0.0; 5], 0.2).is_err());
}
