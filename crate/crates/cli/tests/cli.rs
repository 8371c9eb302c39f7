use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use unibound::{exit, RunOptions};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> PathBuf {
    configs().join(format!("{name}.toml"))
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unibound")).args(args).output().unwrap()
}

fn code(out: &Output) -> u8 {
    out.status.code().unwrap() as u8
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Writes `name` from the shipped configs with one textual substitution.
fn edited(dir: &Path, name: &str, from: &str, to: &str) -> PathBuf {
    let text = fs::read_to_string(config(name)).unwrap();
    assert!(text.contains(from), "{from} not in {name}");
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, text.replacen(from, to, 1)).unwrap();
    path
}

fn run_to(path: &Path, out: &Path, workers: usize) -> unibound::RunReport {
    let opts = RunOptions { out: Some(out.to_path_buf()), workers: Some(workers), ..RunOptions::default() };
    unibound::run(path, &opts).unwrap()
}

fn record(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn every_shipped_config_validates() {
    let mut seen = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let out = bin(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&out), exit::OK, "{}: {}", path.display(), stderr(&out));
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "valid");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn delta_outside_unit_interval_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited(dir.path(), "deviate-point-mass", "delta = 0.1", "delta = 1.5");
    let out = bin(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), exit::CONFIG);
    assert!(stderr(&out).contains("deviation.delta"), "{}", stderr(&out));
    assert!(stderr(&out).contains("(0, 1)"));
}

#[test]
fn unknown_statistic_lists_supported_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited(dir.path(), "deviate-point-mass", "name = \"mean\"", "name = \"median\"");
    let out = bin(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), exit::CONFIG);
    let err = stderr(&out);
    assert!(err.contains("median"));
    for name in unibound::plan::STATISTICS {
        assert!(err.contains(name), "{name} missing from: {err}");
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited(dir.path(), "deviate-point-mass", "[deviation]", "[deviation]\ndelat = 0.2");
    let out = bin(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), exit::CONFIG);
    assert!(stderr(&out).contains("deviation.delat"), "{}", stderr(&out));
}

#[test]
fn oversized_class_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited(dir.path(), "deviate-point-mass", "count = 4", "count = 5000000");
    let out = bin(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), exit::RESOURCE, "{}", stderr(&out));
    assert!(stderr(&out).contains("class.count"));
}

#[test]
fn missing_config_is_an_io_error() {
    let out = bin(&["validate", "/nonexistent/config.toml"]);
    assert_eq!(code(&out), exit::IO);
}

#[test]
fn numeric_route_needs_override_for_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path =
        edited(dir.path(), "deviate-point-mass", "[deviation]", "[constants]\nroute = \"numeric\"\n\n[deviation]");
    let p = path.to_str().unwrap();
    let out = bin(&["validate", p]);
    assert_eq!(code(&out), exit::CONFIG);
    assert!(stderr(&out).contains("constants.route"), "{}", stderr(&out));
    assert_eq!(code(&bin(&["validate", p, "--override-numeric-constants"])), exit::OK);
}

#[test]
fn point_mass_law_gives_zero_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["run", config("deviate-point-mass").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), exit::OK, "{}", stderr(&out));
    let rec = record(&dir.path().join("result.deviate.json"));
    let dev = &rec["outputs"]["deviation"];
    assert_eq!(dev["psi_mean"].as_f64(), Some(0.0));
    assert_eq!(dev["violations"].as_u64(), Some(0));
    assert_eq!(dev["c_hat"].as_f64(), Some(0.0));
    let table = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with("replication,psi,"));
    assert_eq!(lines.clone().count(), 200);
    assert!(lines.all(|l| l.split(',').nth(1) == Some("0.0")));
}

#[test]
fn complexity_monte_carlo_tracks_exact() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_to(&config("complexity-tables"), dir.path(), 2);
    assert_eq!(report.exit_code(), exit::OK);
    let mut reader = csv::Reader::from_path(&report.files.table).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let value = |method: &str| -> (f64, f64) {
        let row = rows.iter().find(|r| &r[0] == method).unwrap();
        (row[2].parse().unwrap(), row[3].parse().unwrap_or(0.0))
    };
    let (exact, _) = value("exact");
    let (mc, se) = value("rademacher-mc");
    let (g, _) = value("gaussian-mc");
    assert!((mc - exact).abs() <= 4.0 * se, "{mc} ± {se} vs {exact}");
    assert!(exact <= (std::f64::consts::FRAC_PI_2).sqrt() * g + 1e-2);
}

#[test]
fn worker_count_does_not_change_tables() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["tail-mean-coins", "deviate-variance"] {
        let a = run_to(&config(name), &dir.path().join(format!("{name}-1")), 1);
        let b = run_to(&config(name), &dir.path().join(format!("{name}-3")), 3);
        assert_eq!(fs::read(&a.files.table).unwrap(), fs::read(&b.files.table).unwrap(), "{name}");
    }
}

#[test]
fn result_record_reruns_to_the_same_table() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_to(&config("probe-variance"), &dir.path().join("first"), 2);
    let second = run_to(&first.files.record, &dir.path().join("second"), 1);
    assert_eq!(fs::read(&first.files.table).unwrap(), fs::read(&second.files.table).unwrap());
    let echo = |path: &Path| {
        let mut config = record(path)["config"].clone();
        config.as_object_mut().unwrap().remove("out");
        config
    };
    assert_eq!(echo(&first.files.record), echo(&second.files.record));
}

#[test]
fn seed_override_is_recorded_and_changes_draws() {
    let dir = tempfile::tempdir().unwrap();
    let base = run_to(&config("tail-mean-coins"), &dir.path().join("base"), 1);
    let opts = RunOptions { seed: Some(99), out: Some(dir.path().join("other")), ..RunOptions::default() };
    let other = unibound::run(&config("tail-mean-coins"), &opts).unwrap();
    assert_eq!(record(&other.files.record)["config"]["seed"].as_u64(), Some(99));
    assert_ne!(fs::read(&base.files.table).unwrap(), fs::read(&other.files.table).unwrap());
}
