//! End-to-end runs of the `catenoid-lab` binary.

use std::process::{Command, Output};

use catenoid_lab::cli::SWEEP_HEADERS;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catenoid-lab"))
        .args(args)
        .env_remove("CATENOID_LAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SMALL_SWEEP: &[&str] = &["sweep", "--min", "0.6", "--max", "2.0", "--count", "4", "--k-max", "2", "--format", "csv"];

#[test]
fn verify_passes_at_default_parameter() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_sweep_header_and_rows() {
    let out = run(SMALL_SWEEP);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, SWEEP_HEADERS);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    let mut last_a = 0.0;
    for row in &rows {
        let a: f64 = row[col("a")].parse().unwrap();
        assert!(a > last_a);
        last_a = a;
        assert_eq!(&row[col("ind")], "4");
        assert_eq!(&row[col("nul")], "2");
        assert_eq!(&row[col("status")], "evidence");
        let margin: f64 = row[col("G_margin")].parse().unwrap();
        let alt: f64 = row[col("G_margin_alt")].parse().unwrap();
        assert_eq!(margin > 0.0, alt > 0.0);
    }
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let serial = Command::new(env!("CARGO_BIN_EXE_catenoid-lab"))
        .args(SMALL_SWEEP)
        .env("CATENOID_LAB_WORKERS", "1")
        .output()
        .unwrap();
    let parallel = run(&[SMALL_SWEEP, &["--workers", "3"]].concat());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn json_schema() {
    let out = run(&["geometry", "--a", "1.0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["command"], "geometry");
    let row = &value["rows"][0];
    assert_eq!(row["a"], 1.0);
    assert!(row["s0"].as_f64().unwrap() > 0.0);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.json");
    let direct = run(&["asymptotics", "--format", "json"]);
    let to_file = run(&["asymptotics", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(run(&["geometry", "--a", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["geometry", "--a", "nan"]).status.code(), Some(2));
    assert_eq!(run(&["geometry"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--min", "2", "--max", "1"]).status.code(), Some(2));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_catenoid-lab"))
        .args(SMALL_SWEEP)
        .env("CATENOID_LAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn spectrum_table_lists_both_parities() {
    let out = run(&["spectrum", "--a", "1.0", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("even") && text.contains("odd"), "{text}");
}
