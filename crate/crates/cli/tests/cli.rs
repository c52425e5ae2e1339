//! End-to-end checks of the binary: exit codes, JSON round trips, config
//! handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_actionrate"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn solve_success_and_symmetry() {
    let out = run(&["solve"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["v_m"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["residual_left"].as_f64().unwrap() < 1e-10);
    assert!(v["residual_right"].as_f64().unwrap() < 1e-10);
    assert!(v["production_left"].as_f64().unwrap() >= 0.0);
}

#[test]
fn no_two_shock_exits_2() {
    let out = run(&["solve", "--v-minus", "0", "--v-plus", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("existence condition"), "stderr: {msg}");
}

#[test]
fn malformed_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"gamma": 2.0, "no_such_key": true}"#).unwrap();
    let out = run(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(&path, r#"{"tolerances": {"root": 0.0}}"#).unwrap();
    let out = run(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"gamma": 2.0, "data": {"rho_minus": 1.0, "rho_plus": 1.0, "v_minus": 2.0, "v_plus": -2.0}}"#,
    )
    .unwrap();
    let out = run(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rho_m_config = stdout_json(&out)["rho_m"].as_f64().unwrap();
    // flag overrides the file value
    let out = run(&[
        "solve",
        "--config",
        path.to_str().unwrap(),
        "--v-minus",
        "1",
        "--v-plus",
        "-1",
    ]);
    let rho_m_flag = stdout_json(&out)["rho_m"].as_f64().unwrap();
    assert!(rho_m_flag < rho_m_config);
}

#[test]
fn compare_inadmissible_exits_4_with_report() {
    let out = run(&["compare", "--rho1", "1.8019377358048385", "--eps2", "0"]);
    assert_eq!(out.status.code(), Some(4));
    let v = stdout_json(&out);
    assert_eq!(v["admissible"], serde_json::Value::Bool(false));
    assert!(v["kappa"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn compare_report_round_trips_and_flags_verdicts() {
    let out = run(&["compare", "--rho1", "1.75", "--eps2", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["kappa"].as_f64().unwrap() < 0.0);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 5);
    // re-serialize and re-parse: identical value
    let text = serde_json::to_string(&v).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v, back);
    let sarac = verdicts
        .iter()
        .find(|r| r["criterion"] == "Sarac")
        .expect("sarac report present");
    let winner = sarac["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p[1] == "StrictlyAdmissible")
        .expect("a winner");
    assert_eq!(winner[0], "two-shock");
}

#[test]
fn compare_emits_plot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("gap.csv");
    let out = run(&[
        "compare",
        "--rho1",
        "1.75",
        "--eps2",
        "0.05",
        "--samples",
        "16",
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.starts_with("schema_version,t,d_value\n"));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn scan_single_point_deterministic_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mk = |name: &str| -> PathBuf { dir.path().join(name) };
    let a = mk("a.csv");
    let b = mk("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = run(&[
            "scan",
            "--gammas",
            "2.0",
            "--rho1-count",
            "1",
            "--eps2-count",
            "1",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let ta = std::fs::read(&a).unwrap();
    let tb = std::fs::read(&b).unwrap();
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 7, "header + one row per case");
}

#[test]
fn scan_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(&config, r#"{"output": {"format": "json"}}"#).unwrap();
    let out_path = dir.path().join("records.json");
    let out = run(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--gammas",
        "2.0",
        "--rho1-count",
        "3",
        "--eps2-count",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 36);
}

#[test]
fn verify_reports_decreasing_residuals() {
    let out = run(&["verify", "--resolution", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["mass_decreasing"], serde_json::Value::Bool(true));
    assert_eq!(v["momentum_decreasing"], serde_json::Value::Bool(true));
    assert_eq!(v["energy_sign_ok"], serde_json::Value::Bool(true));
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["compare", "--rho1", "1.75"]); // missing --eps2
    assert_eq!(out.status.code(), Some(1));
}
