// 1.5708 below is the rounded reported value, compared with tolerance
#![allow(clippy::approx_constant)]

use std::path::Path;
use std::process::{Command, Output};

fn twomode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twomode")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gate_check_not() {
    let o = twomode(&["gate-check", "--gate", "not", "--g", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!((field(&out, "t_gate") - 1.5708).abs() < 5e-5);
    assert!(field(&out, "deviation") <= 1e-10);
}

#[test]
fn gate_check_z_asymptotic() {
    let o = twomode(&["gate-check", "--gate", "z", "--g", "1.0", "--detuning-factor", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "deviation") <= 0.03);
}

#[test]
fn small_delta_sweep_for_hadamard() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n_atoms": 100, "ddelta_ratio_values": [0.0, 0.05, 0.1]}"#);
    let out = dir.path().join("h.csv");
    let o = twomode(&["sweep", "--kind", "delta", "--gate", "h", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let f: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(f.len(), 3);
    assert!(f.windows(2).all(|w| w[1] <= w[0]), "{f:?}");
    assert!(dir.path().join("h.json").exists());
}

#[test]
fn help_documents_every_subcommand() {
    let o = twomode(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for sub in ["gate-check", "evolve", "sweep", "trajectory"] {
        assert!(out.contains(sub));
        let o = twomode(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn bad_json_exits_two_with_one_line_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"omega_a":1,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"delta":4,"n_atoms":7}"#,
    );
    let out = dir.path().join("s.csv");
    let o = twomode(&["evolve", "--config", &cfg, "--t", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(err.contains("`g`"), "{err}");

    let cfg = write(dir.path(), "q.json", "{not json");
    let o = twomode(&["evolve", "--config", &cfg, "--t", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_parameter_values_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"omega_a":1,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":-1,"delta":4,"n_atoms":7}"#,
    );
    let out = dir.path().join("s.csv");
    let o = twomode(&["evolve", "--config", &cfg, "--t", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("`g`"));
}

#[test]
fn evolve_writes_a_normalized_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"omega_a":4,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":1,"delta":4,"n_atoms":30}"#,
    );
    let out = dir.path().join("s.csv");
    let o = twomode(&["evolve", "--config", &cfg, "--t", "1.5707963267948966", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = twomode::StateVector::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(s.dim(), 31);
    assert!((s.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn si_evolution_matches_g_units() {
    let dir = tempfile::tempdir().unwrap();
    let g = 2.0 * std::f64::consts::PI * 1500.0;
    let unit = write(
        dir.path(),
        "u.json",
        r#"{"omega_a":4,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":1,"delta":4,"n_atoms":10}"#,
    );
    let si_text = format!(
        r#"{{"omega_a":{},"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":{},"delta":{},"n_atoms":10}}"#,
        4.0 * g,
        g,
        4.0 * g
    );
    let si = write(dir.path(), "si.json", &si_text);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let t = 0.8;
    assert!(twomode(&["evolve", "--config", &unit, "--t", &t.to_string(), "--out", a.to_str().unwrap()]).status.success());
    assert!(twomode(&["evolve", "--config", &si, "--t", &(t / g).to_string(), "--si", "--out", b.to_str().unwrap()])
        .status
        .success());
    let sa = twomode::StateVector::read_csv(std::fs::File::open(&a).unwrap()).unwrap();
    let sb = twomode::StateVector::read_csv(std::fs::File::open(&b).unwrap()).unwrap();
    assert!(sa.inner(&sb).unwrap().norm_sqr() > 1.0 - 1e-10);
}

#[test]
fn gate_trajectory_ends_at_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.json", r#"{"gate":"not","n_atoms":50,"n_samples":21}"#);
    let out = dir.path().join("t.csv");
    let o = twomode(&["trajectory", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["t", "x", "y", "z"]);
    let rows: Vec<Vec<f64>> = reader.records().map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 21);
    let last = rows.last().unwrap();
    let theta = std::f64::consts::FRAC_PI_8;
    assert!((last[1] - theta.sin()).abs() < 1e-6);
    assert!((last[3] + theta.cos()).abs() < 1e-6);
}
