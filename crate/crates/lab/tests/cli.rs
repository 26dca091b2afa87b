//! End-to-end tests of the binary: output formats, determinism, exit
//! codes, and the manifest round-trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lanczos-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lanczos-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

#[test]
fn spectrum_unif_three_points() {
    let text = stdout(&run(&["spectrum", "--kind", "unif", "--n", "3"]));
    let rows: Vec<(f64, usize)> = text
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows, vec![(1.0, 1), (0.5, 1), (0.0, 1)]);
}

#[test]
fn spectrum_lap_top_value() {
    let text = stdout(&run(&["spectrum", "--kind", "lap", "--n", "5"]));
    let top: f64 = text
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((top - 3.7320508).abs() < 1e-7, "top {top}");
}

#[test]
fn spectrum_hard_instance_multiplicities() {
    let text = stdout(&run(&[
        "spectrum",
        "--kind",
        "legendre-hard",
        "--n",
        "101",
        "--m",
        "2",
    ]));
    let mults: Vec<usize> = text
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(mults, vec![1, 33, 33, 34]);
}

#[test]
fn run_is_deterministic_and_hits_the_limit() {
    let dir = temp_dir("run");
    let csv_a = dir.join("a.csv");
    let csv_b = dir.join("b.csv");
    let args = [
        "run", "--kind", "lap", "--n", "100000", "--m-max", "100", "--trials", "20", "--seed",
        "7", "--path", "measure",
    ];
    stdout(&run(&[&args[..], &["--csv", csv_a.to_str().unwrap()]].concat()));
    stdout(&run(&[&args[..], &["--csv", csv_b.to_str().unwrap()]].concat()));
    let bytes_a = std::fs::read(&csv_a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&csv_b).unwrap(), "identical bytes");

    let text = String::from_utf8(bytes_a).unwrap();
    let mean_100: f64 = text
        .lines()
        .find(|l| l.starts_with("100,"))
        .expect("row m=100")
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.55..=0.70).contains(&mean_100), "mean {mean_100}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn manifest_round_trip_reproduces_outputs() {
    let dir = temp_dir("manifest");
    let csv_a = dir.join("a.csv");
    let json = dir.join("a.json");
    stdout(&run(&[
        "run", "--kind", "semi", "--n", "500", "--m-max", "8", "--trials", "5", "--seed", "13",
        "--csv", csv_a.to_str().unwrap(), "--json", json.to_str().unwrap(),
    ]));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let config_file = dir.join("config.json");
    std::fs::write(&config_file, manifest["config"].to_string()).unwrap();

    let csv_b = dir.join("b.csv");
    stdout(&run(&[
        "run", "--config", config_file.to_str().unwrap(), "--csv", csv_b.to_str().unwrap(),
    ]));
    assert_eq!(std::fs::read(&csv_a).unwrap(), std::fs::read(&csv_b).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounds_kw_expected_json() {
    let text = stdout(&run(&["bounds", "--name", "kw-expected", "--n", "100", "--m", "10"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["name"], "kw-expected");
    let value = v["value"].as_f64().unwrap();
    assert!((value - 0.2281).abs() < 5e-5, "value {value}");
    assert!(v["hypotheses"].as_array().unwrap().iter().all(|h| h["met"] == true));
}

#[test]
fn bounds_main_upper_flags_small_n() {
    let text = stdout(&run(&["bounds", "--name", "main-upper", "--n", "50", "--m", "10"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let flag = v["hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|h| h["name"] == "n >= 100")
        .expect("hypothesis present");
    assert_eq!(flag["met"], false);
}

#[test]
fn predict_uniform_shifted_legendre_zero() {
    let text = stdout(&run(&[
        "predict", "--density", "uniform", "--a", "0", "--b", "1", "--m", "2",
    ]));
    assert!(text.contains("2,0.2113"), "output: {text}");
}

#[test]
fn verify_quick_passes() {
    let out = run(&["verify", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("all 6 checks passed"));
}

#[test]
fn verify_fault_injection_names_the_failed_check() {
    let out = run(&["verify", "--level", "quick", "--corrupt-legendre"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("FAIL gauss-legendre-exactness"), "output: {text}");
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["bounds", "--name", "no-such-bound"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["run", "--kind", "lap", "--n", "10", "--m-max", "50"]);
    assert_eq!(out.status.code(), Some(2), "m_max > n is a config error");
}

#[test]
fn io_errors_exit_3() {
    let out = run(&[
        "run", "--kind", "lap", "--n", "50", "--m-max", "5", "--trials", "2", "--seed", "1",
        "--csv", "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_dir_env_var_resolves_bare_names() {
    let dir = temp_dir("envdir");
    let out = bin()
        .env("LANCZOS_LAB_OUT", &dir)
        .args(["spectrum", "--kind", "unif", "--n", "4", "--out", "s.txt"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(dir.join("s.txt").exists());
    std::fs::remove_dir_all(&dir).ok();
}
