use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tdem(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdem")).args(args).current_dir(dir).output().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "hbar = [").unwrap();
    for args in [
        &["--config", "bad.toml", "verify"][..],
        &["--config", "missing.toml", "density"],
        &["--preset", "nope", "density"],
        &["density", "--grid", ""],
        &["uncertainty", "--steps", "1"],
        &["wigner", "--t", ""],
        &["wigner"],
        &["verify", "--mutate", "unknown"],
    ] {
        assert_eq!(tdem(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn density_and_uncertainty_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdem(dir.path(), &["--out", "rho.csv", "density", "--single", "--grid", "-3:3:7"]);
    assert!(out.status.success());
    let r = rows(&dir.path().join("rho.csv"));
    assert!((r[3][1] - 0.5).abs() < 1e-12);
    let meta: Value = serde_json::from_slice(&std::fs::read(dir.path().join("rho.json")).unwrap()).unwrap();
    assert_eq!(meta["preset"], "paper-toy");

    assert!(tdem(dir.path(), &["--out", "u.csv", "uncertainty", "--t1", "0.001", "--steps", "2"]).status.success());
    for row in rows(&dir.path().join("u.csv")) {
        assert!((row[3] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3);
    }
}

#[test]
fn wigner_numeric_sidecar_reports_selfcheck() {
    let dir = tempfile::tempdir().unwrap();
    let out = tdem(
        dir.path(),
        &["--out", "w", "wigner", "--t", "0,20", "--x", "-8:8:21", "--p", "-4:4:21", "--method", "numeric"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for t in ["0", "20"] {
        let meta: Value = serde_json::from_slice(&std::fs::read(dir.path().join(format!("w/wigner_t{t}.json"))).unwrap()).unwrap();
        assert_eq!(meta["method"], "numeric");
        assert!(meta["selfcheck_max_err"].as_f64().unwrap() < 1e-6);
        assert!((meta["origin_value"].as_f64().unwrap() - 2.50663).abs() < 1e-5);
        assert_eq!(rows(&dir.path().join(format!("w/wigner_t{t}.csv"))).len(), 441);
    }
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "preset = \"paper-toy\"\nnormalize = true\n[output]\nformat = \"json\"\n",
    )
    .unwrap();
    let out = tdem(dir.path(), &["--config", "run.toml", "eigenstate", "--n", "2", "--t", "1", "--grid", "-10:10:2001"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["normalize"], true);
    let norm: f64 = doc["rows"].as_array().unwrap().iter().map(|r| r[3].as_f64().unwrap()).sum::<f64>() * 0.01;
    assert!((norm - 1.0).abs() < 1e-9);
}

#[test]
fn verify_passes_and_mutation_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ok = tdem(dir.path(), &["--out", "report.json", "verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    for key in [
        "constraint_residuals",
        "ode_residuals",
        "orthonormality",
        "eigenvalue_constancy",
        "phase_crosscheck",
        "tdse_residuals",
        "wigner_oracle_maxerr",
        "marginal_maxerr",
        "fidelity",
        "invariant_drift",
    ] {
        assert_eq!(report[key]["pass"], true, "{key}");
    }

    let bad = tdem(dir.path(), &["verify", "--mutate", "drop-dynamical-phase"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("tdse_residuals"));
    let report: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["tdse_residuals"]["pass"], false);
    assert_eq!(report["all_pass"], false);
}

#[test]
fn phases_table_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert!(tdem(dir.path(), &["--out", "ph.csv", "phases", "--n", "1", "--t1", "2", "--steps", "4"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("ph.csv")).unwrap();
    assert!(text.starts_with("t,theta_d,re_theta_g,im_theta_g,re_theta_total,im_theta_total\n"));
    let r = rows(&dir.path().join("ph.csv"));
    assert_eq!(r.len(), 5);
    for row in r {
        assert!((row[1] + row[2] - row[4]).abs() < 1e-12);
    }
}
