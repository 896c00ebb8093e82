use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn biortho(args: &[&str]) -> Output {
    biortho_env(args, &[])
}

fn biortho_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_biortho"));
    cmd.args(args).env_remove("BIORTHO_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn verify_kg_reports_suite_checks() {
    let o = biortho(&["verify", "--suite", "kg", "--grid", "32", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    assert!(r["failures"].as_array().unwrap().is_empty());
    let names: Vec<&str> = r["suites"][0]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for want in ["density positivity", "continuity biorthogonal", "biorthogonality", "completeness"] {
        assert!(names.contains(&want), "{names:?}");
    }
    // the report survives a parse/serialize round trip
    let again: Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn verify_failure_exits_one_and_lists_failures() {
    // a box too small for the mass tails of the Newton-Wigner transform
    let o = biortho(&["verify", "--suite", "kg", "--grid", "32", "--dk", "0.3"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["passed"], false);
    let failed: Vec<&str> = r["failures"].as_array().unwrap().iter().map(|f| f["check"].as_str().unwrap()).collect();
    assert!(failed.contains(&"newton-wigner similarity"), "{failed:?}");
    let err: Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert_eq!(err["failures"], r["failures"]);
}

#[test]
fn numerical_guard_exits_three() {
    let o = biortho(&["verify", "--suite", "kg", "--grid", "8", "--mass", "0"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let r = json(&o);
    assert!(r["failures"].as_array().unwrap().iter().any(|f| f.get("error").is_some()));
}

#[test]
fn usage_errors_exit_two() {
    let none = biortho(&[]);
    assert_eq!(code(&none), 2);
    assert!(stderr(&none).contains("Usage:"));

    let empty = config_file("");
    let o = biortho(&["--config", empty.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Usage:"));

    let braces = config_file("{}");
    assert_eq!(code(&biortho(&["verify", "--all", "--config", braces.path().to_str().unwrap()])), 2);

    let unknown = config_file(r#"{"command": "verify", "suites": ["kg"]}"#);
    assert_eq!(code(&biortho(&["--config", unknown.path().to_str().unwrap()])), 2);

    assert_eq!(code(&biortho(&["verify"])), 2);
    assert_eq!(code(&biortho(&["kg-density", "--grid", "7"])), 2);
    assert_eq!(code(&biortho(&["boost-check", "--axis", "1,0"])), 2);
    assert_eq!(code(&biortho(&["transverse-delta", "--component", "0,3"])), 2);
    assert_eq!(code(&biortho(&["kg-density", "--format", "xml"])), 2);
    assert_eq!(code(&biortho_env(&["kg-density", "--grid", "8"], &[("BIORTHO_THREADS", "0")])), 2);
}

#[test]
fn config_overrides_flags() {
    let cfg = config_file(r#"{"command": "kg-density", "grid": 8, "slice": "y", "seed": 3}"#);
    let o = biortho(&["kg-density", "--grid", "16", "--slice", "x", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9);
    let direct = biortho(&["kg-density", "--grid", "8", "--slice", "y", "--seed", "3"]);
    assert_eq!(o.stdout, direct.stdout);
}

#[test]
fn kg_density_csv_layouts() {
    let o = biortho(&["kg-density", "--grid", "8", "--slice", "x"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,p_plus,p_minus"));
    assert_eq!(text.lines().count(), 9);

    let full = biortho(&["kg-density", "--grid", "8", "--t", "2"]);
    let text = stdout(&full);
    assert_eq!(text.lines().next(), Some("x,y,z,p_plus,p_minus"));
    assert_eq!(text.lines().count(), 8 * 8 * 8 + 1);
    let total: f64 = text
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            v[3] + v[4]
        })
        .sum();
    let dx = 2.0 * std::f64::consts::PI / (8.0 * 0.1);
    assert!((total * dx * dx * dx - 1.0).abs() < 1e-10, "{total}");
}

#[test]
fn same_seed_same_bytes() {
    let a = biortho(&["kg-density", "--grid", "16", "--seed", "11", "--t", "1.5"]);
    let b = biortho_env(&["kg-density", "--grid", "16", "--seed", "11", "--t", "1.5"], &[("BIORTHO_THREADS", "3")]);
    let c = biortho(&["kg-density", "--grid", "16", "--seed", "12", "--t", "1.5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let args = ["verify", "--suite", "spectral", "--suite", "lorentz", "--grid", "16", "--seed", "5"];
    let r1 = biortho(&args);
    let r2 = biortho_env(&args, &[("BIORTHO_THREADS", "2")]);
    assert_eq!(code(&r1), 0, "{}", stderr(&r1));
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn causality_probe_report() {
    let o = biortho(&["kg-density", "--grid", "16", "--probe", "positive-only", "--t", "2", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    for key in ["t", "outside_fraction", "baseline"] {
        assert!(r[key].is_number(), "{key}");
    }
    let csv = biortho(&["kg-density", "--grid", "16", "--probe", "both", "--t", "2", "--samples", "3"]);
    assert_eq!(stdout(&csv).lines().next(), Some("t,outside_fraction"));
    assert_eq!(stdout(&csv).lines().count(), 4);
}

#[test]
fn photon_density_outputs() {
    let o = biortho(&["photon-density", "--grid", "8", "--slice", "z", "--epsilon", "minus", "--helicity", "minus"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(
        text.lines().next(),
        Some("x,y,z,re(psi_x),im(psi_x),re(psi_y),im(psi_y),re(psi_z),im(psi_z)")
    );
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 9));

    let j = json(&biortho(&["photon-density", "--grid", "8", "--format", "json"]));
    assert_eq!(j["schema_version"], 1);
    let by = j["by_epsilon_lambda"].as_object().unwrap();
    assert_eq!(by.len(), 4);
    let sum: f64 = by.values().map(|v| v.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-10);
    assert!((j["norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn emission_radial_wavefront() {
    let o = biortho(&["emission", "--omega0", "1", "--t", "100", "--profile", "radial", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let front = r["profile"]["wavefront"].as_f64().unwrap();
    assert!((front - 100.0).abs() <= 1.0, "{front}");
    let rad = r["profile"]["r"].as_array().unwrap();
    let dens = r["profile"]["radial_density"].as_array().unwrap();
    assert_eq!(rad.len(), dens.len());

    let csv = biortho(&["emission", "--omega0", "1", "--t", "20", "--profile", "number", "--samples", "3"]);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,n");
    assert_eq!(lines[1], "0,0");
    assert_eq!(lines.len(), 4);
}

#[test]
fn emission_config_keys() {
    let cfg = config_file(r#"{"command": "emission", "omega0": 2, "dipole": [[1,0],[0,1],[0,0]], "W": 0.5, "n_theta": 6, "n_phi": 6, "t": 10, "profile": "map", "samples": 3}"#);
    let o = biortho(&["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,y,z,density"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn boost_check_report() {
    let o = biortho(&["boost-check", "--rapidity", "-0.4", "--axis", "0,1,1", "--mass", "0.7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    for key in ["rapidity", "axis", "original", "boosted", "rel_err"] {
        assert!(!r[key].is_null(), "{key}");
    }
    assert_eq!(r["schema_version"], 1);
    assert!(r["rel_err"].as_f64().unwrap() < 1e-6);
}

#[test]
fn transverse_delta_outputs() {
    let o = biortho(&["transverse-delta", "--grid", "16", "--component", "0,2", "--slice", "y"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,delta_xz"));
    assert_eq!(text.lines().count(), 17);
    let j = json(&biortho(&["transverse-delta", "--grid", "16", "--format", "json"]));
    assert!(j["projector_max_err"].as_f64().unwrap() < 1e-12);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("slice.csv");
    let o = biortho(&["kg-density", "--grid", "8", "--slice", "z", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,p_plus,p_minus\n"));

    let bad = dir.path().join("missing").join("x.csv");
    assert_eq!(code(&biortho(&["kg-density", "--grid", "8", "--out", bad.to_str().unwrap()])), 2);
}
