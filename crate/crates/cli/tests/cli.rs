use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn cfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfield")).args(args).env_remove("CFIELD_WORKERS").output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).expect("stdout is JSON").as_array().expect("an array").clone()
}

fn re(v: &Value, side: &str) -> f64 {
    v[side]["re"].as_f64().unwrap()
}

#[test]
fn main_identity_example_passes() {
    let out = cfield(&["verify-main", "--a", "0.2,0.2,0.2,0.2", "--tol", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    assert!(r["rel_err"].as_f64().unwrap() <= 1e-6);
    for key in ["quadrature", "tail", "rounding"] {
        assert!(r["budget"][key].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn dougall_example_value() {
    let out = cfield(&["verify-dougall", "--b", "2,2,2,2", "--theta", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    let expected = 3.0 / (16.0 * std::f64::consts::PI);
    assert!((re(r, "lhs") - expected).abs() <= 1e-8 * expected);
}

#[test]
fn sweep_writes_one_row_per_report() {
    let dir = tempfile::tempdir().unwrap();
    let (json, csv) = (dir.path().join("r.json"), dir.path().join("p.csv"));
    let out = cfield(&[
        "sweep",
        "--command",
        "verify-main",
        "--draws",
        "20",
        "--seed",
        "7",
        "--output",
        json.to_str().unwrap(),
        "--plotdata",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(reports.len(), 20);
    assert!(reports.iter().all(|r| r["pass"] == true));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param_hash,rel_err,wall_ms,K,S");
    assert_eq!(lines.len(), 21);
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[0].len(), 16);
        let rel: f64 = cols[1].parse().unwrap();
        assert!(rel <= 1e-6);
    }
}

#[test]
fn empty_sweep_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let out = cfield(&["sweep", "--command", "verify-wilson", "--draws", "0", "--plotdata", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "param_hash,rel_err,wall_ms,K,S\n");
}

fn without_wall_time(text: &[u8]) -> Vec<Value> {
    let mut v: Vec<Value> = serde_json::from_slice(text).unwrap();
    for r in &mut v {
        r.as_object_mut().unwrap().remove("wall_ms");
    }
    v
}

#[test]
fn reruns_are_identical_apart_from_wall_time() {
    let args = ["sweep", "--command", "verify-dougall", "--draws", "5", "--seed", "3"];
    let runs: Vec<Output> =
        ["1", "2"].iter().map(|w| Command::new(env!("CARGO_BIN_EXE_cfield")).args(args).env("CFIELD_WORKERS", w).output().unwrap()).collect();
    assert_eq!(without_wall_time(&runs[0].stdout), without_wall_time(&runs[1].stdout));
    // Byte-level: only the wall_ms lines may differ.
    let lines = |o: &Output| {
        String::from_utf8(o.stdout.clone()).unwrap().lines().filter(|l| !l.contains("\"wall_ms\"")).map(String::from).collect::<Vec<_>>()
    };
    assert_eq!(lines(&runs[0]), lines(&runs[1]));
}

#[test]
fn failing_check_exits_one_with_report() {
    let out = cfield(&["verify-unitarity", "--a", "0.1", "--b", "0.3", "--mu", "0.05", "--nu", "0.25", "--kappa", "printed"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["pass"], false);
}

#[test]
fn numeric_error_exits_one_with_diagnostic() {
    let out = cfield(&["verify-main", "--a", "0.6,0.6,0.6,0.6"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &records(&out)[0];
    assert_eq!(r["pass"], false);
    assert!(r["error"].as_str().unwrap().contains("Re sum"));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["verify-main", "--a", "0.2,0.2,0.2"][..],
        &["verify-main", "--a", "0.2,0.2,0.2,0.2j"],
        &["verify-main"],
        &["bogus"],
        &["sweep", "--command", "eval-gamma"],
        &["verify-main", "--a", "0.2,0.2,0.2,0.2", "--lattice-cutoff", "0"],
        &["--config", "/nonexistent/cfield.json"],
    ] {
        let out = cfield(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_cfield")).args(["bridge", "--theta", "0.3"]).env("CFIELD_WORKERS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"command": "bridge", "params": {"theta": "0.3", "k": "1"}, "tol": 1e-9}"#).unwrap();
    let out = cfield(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["tol"], 1e-9);
    assert_eq!(r["params"]["k"], "1");
    // Flags override the file.
    let out = cfield(&["bridge", "--theta", "0.3", "--k", "4", "--config", path.to_str().unwrap()]);
    assert_eq!(records(&out)[0]["params"]["k"], "4");
    std::fs::write(&path, r#"{"command": "bridge", "colour": 1}"#).unwrap();
    assert_eq!(cfield(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn complex_parameters() {
    let out = cfield(&["eval-gamma", "--a", "0.3+1.2i", "--delta", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = cfield(&["verify-main", "--a", "0.2+0.1i,0.2-0.1i,0.15,0.1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["params"]["a"], "0.2+0.1i,0.2-0.1i,0.15,0.1");
}

#[test]
fn integrand_profile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let out = cfield(&["verify-main", "--a", "0.2,0.2,0.2,0.2", "--profile", path.to_str().unwrap(), "--profile-k", "2", "--profile-s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,s,value");
    assert_eq!(lines.len(), 1 + 5 * 5);
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        let v: f64 = cols[2].parse().unwrap();
        // The |lambda|^2 factor vanishes only at the origin.
        if cols[0] == "0" && cols[1].parse::<f64>().unwrap() == 0.0 {
            assert_eq!(v, 0.0);
        } else {
            assert!(v > 0.0, "{row}");
        }
    }
}

#[test]
fn diffops_reports_both_checks() {
    let out = cfield(&["verify-diffops", "--a", "0.2,0.3,0.4,0.5", "--lambda", "0.3+0.7i", "--lambda-prime", "1.2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = records(&out);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["tol"], 1e-12);
    assert_eq!(r[1]["tol"], 1e-14);
}
