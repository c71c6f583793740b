//! End-to-end runs of the command-line front end.

mod common;

use std::process::Command;

use qgraph::cli::run;
use qgraph::io::{emit_graph_file, load_graph_file};
use serde_json::Value;

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qgraph").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn spectrum_of_interval() {
    let path = fixture_path("interval.json");
    let (code, out, _) = invoke(&["spectrum", &path, "--kmin", "0.5", "--kmax", "20.5"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,multiplicity,C"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 20);
    for (n, row) in rows.iter().enumerate() {
        assert!((row[0] - (n + 1) as f64).abs() < 1e-9);
        assert_eq!(row[1], 1.0);
        assert!((row[2] - std::f64::consts::PI).abs() < 1e-9);
    }
}

#[test]
fn spectrum_reports_multiplicity_on_the_loop() {
    let path = fixture_path("loop.json");
    let (code, out, _) = invoke(&["spectrum", &path, "--kmin", "0.5", "--kmax", "3.2"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("2")));
}

#[test]
fn scattering_at_lasso_scar() {
    let path = fixture_path("lasso.json");
    let (code, out, err) = invoke(&["scattering", &path, "--k", "6.283185307179586"]);
    assert_eq!(code, 0, "{err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["scar"], true);
    assert_eq!(doc["regularized"], true);
    let sigma = &doc["sigma"][0][0];
    assert!((sigma[0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(sigma[1].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn scattering_near_scar_warns() {
    let path = fixture_path("lasso.json");
    let (code, out, _) = invoke(&["scattering", &path, "--k", "6.28319"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["scar"], false);
    assert!(doc["warning"].is_string());
}

#[test]
fn greens_on_lasso_lead() {
    let path = fixture_path("lasso.json");
    let (code, out, _) = invoke(&[
        "greens", &path, "--source", "e1:0.8", "--target", "e1:0.3", "--energy", "1.0,0.2",
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["case"], "lead-lead");
    let k = &doc["k"];
    assert!(k[1].as_f64().unwrap() > 0.0);
    assert!(doc["value"][0].as_f64().unwrap().is_finite());
}

#[test]
fn sweep_marks_poles() {
    let path = fixture_path("interval.json");
    let (code, out, _) = invoke(&[
        "sweep", &path, "--kmin", "1", "--kmax", "3", "--steps", "3", "--quantity", "greens",
        "--source", "e:1.0", "--target", "e:2.0",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",pole")), "{out}");
}

#[test]
fn sweep_sigma_and_xi() {
    let lasso = fixture_path("lasso.json");
    let (code, out, _) = invoke(&[
        "sweep", &lasso, "--kmin", "1", "--kmax", "2", "--steps", "5", "--quantity", "sigma",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    let interval = fixture_path("interval.json");
    let (code, out, _) = invoke(&[
        "sweep", &interval, "--kmin", "1", "--kmax", "2", "--steps", "4", "--quantity", "xi",
        "--eta", "0.1",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k,xi_re,xi_im,xi_abs\n"));
}

#[test]
fn scars_of_lasso() {
    let path = fixture_path("lasso.json");
    let (code, out, _) = invoke(&["scars", &path, "--kmin", "1", "--kmax", "13"]);
    assert_eq!(code, 0);
    let ks: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ks.len(), 2);
    assert!((ks[0] - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn error_exit_codes() {
    let interval = fixture_path("interval.json");
    let lasso = fixture_path("lasso.json");

    let (code, _, err) = invoke(&["spectrum", &interval]);
    assert_eq!(code, 2);
    assert!(err.contains("\"error\""));

    let (code, _, err) = invoke(&[
        "greens", &interval, "--source", "e:1.0", "--target", "e:2.0", "--energy", "4.0",
    ]);
    assert_eq!(code, 3);
    let doc: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(doc["error"], "pole");

    let (code, _, _) = invoke(&["spectrum", &lasso, "--kmin", "1", "--kmax", "2"]);
    assert_eq!(code, 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices": [{"id": "a"}], "edges": [{"id": "e", "endpoints": ["a", "a"], "length": -1}]}"#).unwrap();
    let (code, _, err) = invoke(&["spectrum", bad.to_str().unwrap(), "--kmin", "1", "--kmax", "2"]);
    assert_eq!(code, 4);
    let doc: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(doc["error"], "parse");
    assert!(doc["message"].as_str().unwrap().contains('e'));

    let (code, _, _) = invoke(&[
        "greens", &lasso, "--source", "e9:0.1", "--target", "e1:0.1", "--energy", "1",
    ]);
    assert_ne!(code, 0);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("spectrum.csv");
    let path = fixture_path("interval.json");
    let (code, out, _) = invoke(&[
        "spectrum", &path, "--kmin", "0.5", "--kmax", "3.5", "--output", target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap().lines().count(), 4);
}

#[test]
fn fixtures_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["interval.json", "loop.json", "lasso.json", "star3.json", "star3-equilateral.json"] {
        let q = common::fixture(name);
        let copy = dir.path().join(name);
        std::fs::write(&copy, emit_graph_file(&q, Some(name))).unwrap();
        assert_eq!(load_graph_file(&copy).unwrap(), q, "{name}");
    }
}

#[test]
fn binary_honours_threads_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qgraph");
    let output = Command::new(bin)
        .env("THREADS", "2")
        .args(["spectrum", &fixture_path("interval.json"), "--kmin", "0.5", "--kmax", "2.5"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout).lines().count(), 3);

    let output = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}
