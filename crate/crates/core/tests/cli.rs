mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use canphase::config::ExperimentConfig;

fn canphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canphase"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, config: &ExperimentConfig) -> String {
    let path = dir.join("experiment.toml");
    fs::write(&path, config.to_toml_string().unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn small_config(dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        total_events: 2000,
        k_max: 3,
        output_dir: dir.join("out"),
        cache_dir: common::cache_dir(),
        ..ExperimentConfig::reference()
    }
}

#[test]
fn run_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config(dir.path()));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = canphase(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mut compared = 0;
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        let (x, y) = (fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
        if name == "metadata.json" {
            let strip = |v: &[u8]| {
                String::from_utf8_lossy(v)
                    .lines()
                    .filter(|l| !l.contains("created_unix"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(strip(&x), strip(&y));
        } else {
            assert_eq!(x, y, "{name:?} differs");
        }
        compared += 1;
    }
    assert_eq!(compared, 7);
    let moments = fs::read_to_string(a.join("moments_homodyne.csv")).unwrap();
    assert!(moments.starts_with("k,re,im,stderr_re,stderr_im\n1,"));
    assert_eq!(moments.lines().count(), 4);
    let bars = fs::read_to_string(a.join("bars.csv")).unwrap();
    assert_eq!(bars.lines().count(), 1 + 3 * 7);

    let c = dir.path().join("c");
    let o = canphase(&["run", "--config", &cfg, "--out", c.to_str().unwrap(), "--seed", "99"]);
    assert!(o.status.success());
    assert_ne!(
        fs::read(a.join("moments_homodyne.csv")).unwrap(),
        fs::read(c.join("moments_homodyne.csv")).unwrap()
    );
    let meta: serde_json::Value = serde_json::from_slice(&fs::read(c.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 99);
    assert_eq!(meta["counts"].as_array().unwrap().len(), 41);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let reference = ExperimentConfig::load(&dir.join("reference.toml")).unwrap();
    assert_eq!(reference, ExperimentConfig::reference());
    let coherent = ExperimentConfig::load(&dir.join("coherent.toml")).unwrap();
    assert_eq!(coherent.total_events, 100_000);
}

#[test]
fn one_event_per_phase() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &ExperimentConfig {
            total_events: 41,
            ..small_config(dir.path())
        },
    );
    let o = canphase(&["run", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exact_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config(dir.path()));
    let o = canphase(&["exact", "--config", &cfg]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("<n> = 26.04"));

    let fock = ExperimentConfig {
        state: canphase::config::StateSpec::Fock { n: 2 },
        ..small_config(dir.path())
    };
    let cfg = write_config(dir.path(), &fock);
    let out = dir.path().join("fock");
    assert!(canphase(&["exact", "--config", &cfg, "--out", out.to_str().unwrap()])
        .status
        .success());
    let csv = fs::read_to_string(out.join("exact_moments.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((cols[1], cols[2]), (0.0, 0.0));
    }
    assert_eq!(
        fs::read_to_string(out.join("phase_density.csv"))
            .unwrap()
            .lines()
            .count(),
        722
    );
}

#[test]
fn kernels_command_with_single_table_and_corrupted_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let mut config = small_config(dir.path());
    config.cache_dir = cache.clone();
    config.k_max = 1;
    let cfg = write_config(dir.path(), &config);
    let o = canphase(&["kernels", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("k = 1: max residual"));
    let out = dir.path().join("out");
    assert!(out.join("kernel_k1.csv").exists() && !out.join("kernel_k2.csv").exists());
    let csv = fs::read_to_string(out.join("kernel_k1.csv")).unwrap();
    assert!(csv.starts_with("x,K,K_classical\n"));

    let file = cache.join("kernel_k1.json");
    let text = fs::read_to_string(&file)
        .unwrap()
        .replacen("\"checksum\":\"", "\"checksum\":\"0", 1);
    fs::write(&file, text).unwrap();
    let o = canphase(&["kernels", "--config", &cfg]);
    assert!(o.status.success());
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("checksum mismatch"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn bad_configs_fail_loudly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config(dir.path()));
    let text = fs::read_to_string(&cfg).unwrap().replace("\"squeezed\"", "\"thermal\"");
    fs::write(&cfg, text).unwrap();
    let o = canphase(&["run", "--config", &cfg]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration error"));

    let o = canphase(&["exact", "--config", "/nonexistent/config.toml"]);
    assert!(!o.status.success());
    let o = canphase(&["exact", "--kmax", "0"]);
    assert!(!o.status.success());
}
