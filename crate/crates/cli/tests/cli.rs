use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use unruh_core::analysis::{run_sweep, Axis, Quantity, SweepSpec, SweepVariable};
use unruh_core::correlations::OptimizerSettings;
use unruh_core::unruh::ModelParams;

fn unruh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unruh"))
        .args(args)
        .env_remove("UNRUH_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = unruh(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON document")
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unruh-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap()
}

#[test]
fn correlations_report_keys() {
    let v = json(&["correlations", "--q", "0.4", "--nu2", "1.2566370614", "--alpha", "0.7071067812"]);
    for k in ["q", "nu2", "alpha", "I", "K", "Q", "D_A", "D_R", "C", "concurrence", "negativity", "q_sd", "optimal_angles"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert!(f(&v, "Q") > 0.0);
    assert!((f(&v, "K") + f(&v, "Q") - f(&v, "I")).abs() < 1e-9);
    let theta = v["optimal_angles"]["alice"]["theta"].as_f64().unwrap();
    assert_eq!(theta, format!("{theta:.9e}").parse::<f64>().unwrap());
}

#[test]
fn singlet_values() {
    let v = json(&["correlations", "--nu2", "0"]);
    assert!((f(&v, "I") - 2.0).abs() < 1e-9);
    for k in ["K", "Q", "D_A", "D_R"] {
        assert!((f(&v, k) - 1.0).abs() < 1e-7, "{k} = {}", f(&v, k));
    }
}

#[test]
fn quantum_correlation_vanishes_near_infinite_acceleration() {
    let v = json(&["correlations", "--q", "0.999999", "--nu2", "1.2566370614"]);
    assert!(f(&v, "Q") <= 1e-3);
    assert!((f(&v, "K") - 1.0).abs() <= 1e-3);
}

#[test]
fn physical_parameters_report_to_stderr() {
    let out = unruh(&["correlations", "--physical", "--omega", "1", "--accel", "2", "--eps", "0.1", "--delta", "50"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((f(&v, "q") - (-PI).exp()).abs() < 1e-12);
    assert!(String::from_utf8_lossy(&out.stderr).contains("derived q"));
}

#[test]
fn sudden_change_anchor() {
    let v = json(&["sudden-change", "--nu2", "1.2566370614"]);
    assert!((f(&v, "q_sc") - 0.53925).abs() <= 5e-4);
    assert_eq!(v["method"], "closed-form");
    assert_eq!(f(&v, "tol"), 1e-9);
}

#[test]
fn sudden_change_by_kink() {
    let v = json(&["sudden-change", "--nu2", "1.2566370614", "--alpha", "0.3", "--method", "kink"]);
    assert!((f(&v, "q_sc") - 0.54).abs() <= 0.02);
}

#[test]
fn fit_and_blackhole() {
    let v = json(&["fit", "--range", "0.1", "2.5", "--points", "25"]);
    assert!((f(&v, "b") + 0.51488).abs() <= 0.02);
    let v = json(&["blackhole", "--mass", "1", "--radius", "1e9", "--omega", "1"]);
    assert!(f(&v, "q") < 1e-12);
    let v = json(&["sudden-death", "--nu2", "1.2566370614"]);
    assert!((f(&v, "q_sd") - 0.30547).abs() < 1e-5);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| unruh(args).status.code().unwrap();
    assert_eq!(code(&["correlations", "--q", "0.2"]), 0);
    assert_eq!(code(&["correlations", "--bogus"]), 2);
    assert_eq!(code(&["correlations", "--q", "1.5"]), 2);
    assert_eq!(code(&["blackhole", "--mass", "1", "--radius", "1.5", "--omega", "1"]), 2);
    assert_eq!(code(&["sudden-change", "--nu2", "1e-9"]), 5);
    assert_eq!(code(&["sudden-change", "--nu2", "1.2", "--alpha", "0", "--method", "kink"]), 5);
    assert_eq!(code(&["sweep", "--points", "3", "--out", "/nonexistent-dir/x.csv"]), 4);
    assert_eq!(code(&["fit", "--range", "0.5", "0.5", "--points", "5"]), 2);
}

#[test]
fn errors_leave_stdout_empty() {
    let out = unruh(&["sudden-change", "--nu2", "1e-9"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_csv_round_trips() {
    let dir = scratch("roundtrip");
    let out = Command::new(env!("CARGO_BIN_EXE_unruh"))
        .args(["sweep", "--var", "q", "--lo", "0", "--hi", "0.999", "--points", "21", "--nu2", "1.2566370614"])
        .args(["--quantities", "I,K,Q,D_A,concurrence", "--out", "fig1.csv"])
        .env("UNRUH_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let bytes = std::fs::read(dir.join("fig1.csv")).unwrap();
    assert!(!bytes.contains(&b'\r'));
    assert_eq!(bytes.last(), Some(&b'\n'));

    let spec = SweepSpec {
        axis: Axis { variable: SweepVariable::Q, lo: 0.0, hi: 0.999, points: 21 },
        second: None,
        fixed: ModelParams::symmetric(0.0, 1.2566370614).unwrap(),
        quantities: vec![Quantity::I, Quantity::K, Quantity::Q, Quantity::DiscordA, Quantity::Concurrence],
    };
    let rows = run_sweep(&spec, &OptimizerSettings::default(), None).unwrap();

    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["q", "I", "K", "Q", "D_A", "concurrence", "error"]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(&rows) {
        let expected: Vec<f64> = row.coords.iter().chain(row.values.as_ref().unwrap()).copied().collect();
        for (cell, x) in rec.iter().zip(expected) {
            assert_eq!(cell.parse::<f64>().unwrap(), round12(x) + 0.0, "cell {cell} vs {x}");
        }
        assert_eq!(&rec[rec.len() - 1], "");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "--var", "alpha", "--points", "4", "--var2", "q", "--points2", "6", "--quantities", "K,D_R", "--seed", "9"];
    let a = unruh(&[&args[..], &["--jobs", "1"]].concat());
    let b = unruh(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,q,K,D_R,error"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn sweep_json_output() {
    let v = json(&["sweep", "--var", "nu2", "--points", "3", "--q", "0.4", "--quantities", "I", "--output", "json"]);
    assert_eq!(v["columns"], serde_json::json!(["nu2", "I", "error"]));
    assert!((v["rows"][0][1].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn config_file_with_command_line_override() {
    let dir = scratch("config");
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# shared settings\nnu2 = 0\nq = 0.25\nrange = 0.2 1.0\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["correlations", "--config", p]);
    assert_eq!(f(&v, "q"), 0.25);
    assert_eq!(f(&v, "nu2"), 0.0);
    let v = json(&["correlations", "--config", p, "--q", "0.5"]);
    assert_eq!(f(&v, "q"), 0.5);
    std::fs::write(&path, "not_a_flag = 1\n").unwrap();
    assert_eq!(unruh(&["correlations", "--config", p]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn state_output() {
    let v = json(&["state", "--q", "0.4", "--nu2", "1.2566370614"]);
    let diag: Vec<f64> = (0..4).map(|i| v["real"][i][i].as_f64().unwrap()).collect();
    let expected = [0.424641, 0.202751, 0.202751, 0.169857];
    for (d, e) in diag.iter().zip(expected) {
        assert!((d - e).abs() < 1e-6);
    }
    assert!((v["real"][1][2].as_f64().unwrap() + 0.202751).abs() < 1e-6);
    let out = unruh(&["state", "--output", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 17);
}
