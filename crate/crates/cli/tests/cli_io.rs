//! Behavioral tests of the `edgelap` binary: output shapes, exit codes,
//! file handling, and the JSON round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn edgelap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgelap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON on stdout")
}

#[test]
fn spectrum_triangle_rows() {
    let out = edgelap(&["spectrum", "--input", &fixture("triangle.graph")]);
    let doc = json_stdout(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let multiplicities: Vec<u64> = rows
        .iter()
        .map(|r| r["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(multiplicities, [1, 2, 2, 2]);
    assert_eq!(rows[0]["provenance"], "constant");
    assert_eq!(rows[1]["provenance"], "vertex");
    assert_eq!(rows[3]["provenance"], "constant+interior-2pi");
    let omega = rows[1]["omega"].as_f64().unwrap();
    assert!((omega - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
}

#[test]
fn spectrum_path3_matches_its_adjacency() {
    let out = edgelap(&["spectrum", "--input", &fixture("path3.graph")]);
    let doc = json_stdout(&out);
    let omegas: Vec<f64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["omega"].as_f64().unwrap())
        .collect();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let expected = [0.0, half_pi, 2.0 * half_pi, 3.0 * half_pi, 4.0 * half_pi];
    assert_eq!(omegas.len(), expected.len());
    for (got, want) in omegas.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn spectrum_csv_is_a_flat_table() {
    let out = edgelap(&[
        "spectrum",
        "--input",
        &fixture("triangle.graph"),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "omega,omega_squared,multiplicity,provenance"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    let to_stdout = edgelap(&["spectrum", "--input", &fixture("k4.graph")]);
    let to_file = edgelap(&[
        "spectrum",
        "--input",
        &fixture("k4.graph"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn missing_file_is_an_input_error() {
    let out = edgelap(&["spectrum", "--input", "/nonexistent/g.graph"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_graph_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.graph");
    std::fs::write(&path, "e 0 1\ne 2 2\n").unwrap();
    let out = edgelap(&["spectrum", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn invalid_flags_are_input_errors() {
    let zero_cutoff = edgelap(&[
        "spectrum",
        "--input",
        &fixture("triangle.graph"),
        "--cutoff",
        "0",
    ]);
    assert_eq!(zero_cutoff.status.code(), Some(2));

    let coarse = edgelap(&[
        "oracle",
        "--input",
        &fixture("triangle.graph"),
        "--m",
        "4",
    ]);
    assert_eq!(coarse.status.code(), Some(2));

    let csv_eigfun = edgelap(&[
        "eigfun",
        "--input",
        &fixture("triangle.graph"),
        "--format",
        "csv",
    ]);
    assert_eq!(csv_eigfun.status.code(), Some(2));

    let tiny_resolution = edgelap(&[
        "heat",
        "--input",
        &fixture("triangle.graph"),
        "--resolution",
        "1",
    ]);
    assert_eq!(tiny_resolution.status.code(), Some(2));
}

#[test]
fn eigfun_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pendant.json");
    let eigfun = edgelap(&[
        "eigfun",
        "--input",
        &fixture("triangle_pendant.graph"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(eigfun.status.success());

    let verify = edgelap(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(doc["report"]["passed"], true);
    assert_eq!(doc["report"]["suites"].as_array().unwrap().len(), 8);
}

#[test]
fn tampered_eigensystem_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("system.json");
    let eigfun = edgelap(&[
        "eigfun",
        "--input",
        &fixture("c4.graph"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(eigfun.status.success());

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let c = doc["entries"][1]["edges"][0]["C"].as_f64().unwrap();
    doc["entries"][1]["edges"][0]["C"] = Value::from(c * 1.05 + 0.01);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let verify = edgelap(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["report"]["passed"], false);
}

#[test]
fn unparseable_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"graph\": 12}").unwrap();
    let out = edgelap(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeta_triangle_at_one_half() {
    let out = edgelap(&[
        "zeta",
        "--input",
        &fixture("triangle.graph"),
        "--u",
        "0.5",
    ]);
    let doc = json_stdout(&out);
    assert_eq!(doc["zeta_reciprocal"].as_f64().unwrap(), 0.765625);
}

#[test]
fn oracle_matches_assembly_within_discretization_error() {
    let out = edgelap(&[
        "oracle",
        "--input",
        &fixture("triangle.graph"),
        "--m",
        "128",
        "--k",
        "6",
    ]);
    let doc = json_stdout(&out);
    let oracle: Vec<f64> = doc["oracle"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let assembled: Vec<f64> = doc["assembled"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(oracle.len(), 6);
    for (o, a) in oracle.iter().zip(&assembled) {
        assert!((o - a).abs() < 2e-3, "{o} vs {a}");
    }
}

#[test]
fn heat_output_reports_conserved_total() {
    let one = edgelap(&["heat", "--input", &fixture("c4.graph"), "--t", "0.4"]);
    let doc1 = json_stdout(&one);
    let two = edgelap(&["heat", "--input", &fixture("c4.graph"), "--t", "1.9"]);
    let doc2 = json_stdout(&two);
    let h1 = doc1["total_heat"].as_f64().unwrap();
    let h2 = doc2["total_heat"].as_f64().unwrap();
    assert!(h1.abs() > 0.01);
    assert!((h1 - h2).abs() < 1e-10);
    assert_eq!(doc1["field"].as_array().unwrap().len(), 4);
}

#[test]
fn wave_output_conserves_energy_and_reports_leakage() {
    let out = edgelap(&[
        "wave",
        "--input",
        &fixture("cycle12.graph"),
        "--t",
        "2",
        "--cutoff",
        "12.566370614359172",
    ]);
    let doc = json_stdout(&out);
    let e0 = doc["energy_initial"].as_f64().unwrap();
    let e1 = doc["energy_final"].as_f64().unwrap();
    assert!((e0 - e1).abs() <= 1e-8 * e0);
    assert_eq!(doc["leakage_threshold"].as_f64().unwrap(), 2.5);
    assert!(doc["leakage"].as_f64().unwrap() < 0.1);
    let samples = doc["field"][0]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 33);
}

#[test]
fn field_csv_has_resolution_plus_one_rows_per_edge() {
    let out = edgelap(&[
        "wave",
        "--input",
        &fixture("triangle.graph"),
        "--t",
        "1",
        "--resolution",
        "8",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "edge,x,value");
    assert_eq!(lines.count(), 3 * 9);
}
