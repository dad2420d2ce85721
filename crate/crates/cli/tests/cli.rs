use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn ihara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihara"))
        .args(args)
        .env_remove("ZETA_MAX_DARTS")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zeta_of_k4() {
    let r = report(&ihara(&["zeta", path(&data("k4.json"))]));
    let bass = r["result"]["bass_det"].as_array().unwrap();
    assert_eq!(bass.len(), 9);
    assert_eq!(bass[0], 1);
    assert_eq!(r["result"]["bass_exponent"], 2);
    assert_eq!(r["result"]["bass_identity"], true);
    assert_eq!(r["result"]["valid_radius"], "1/2");
    assert_eq!(r["manifest"]["subcommand"], "zeta");
    assert_eq!(r["manifest"]["inputs"]["graph"].as_str().unwrap().len(), 64);
}

#[test]
fn pentagon_oracle_agrees() {
    let r = report(&ihara(&["zeta", path(&data("c5.json")), "--oracle-max-len", "10"]));
    assert_eq!(r["result"]["oracle_agrees"], true);
    assert_eq!(r["result"]["oracle_class_counts"]["5"], 2);
}

#[test]
fn evaluation_point() {
    let r = report(&ihara(&["zeta", path(&data("c5.json")), "--eval", "0.5", "-0.25"]));
    let z = num(&r["result"]["eval"]["z"][1]);
    assert_eq!(z, -0.25);
    assert_eq!(r["result"]["eval"]["inside_radius"], true);
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn malformed_involution_exits_2() {
    let out = ihara(&["zeta", path(&data("malformed.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dart 0"));
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    assert_eq!(ihara(&["zeta", "/nonexistent/graph.json"]).status.code(), Some(2));
    assert_eq!(ihara(&["zeta"]).status.code(), Some(2));
    assert_eq!(ihara(&["tower", "--preset", "cycles", "--z", "abc"]).status.code(), Some(2));
}

#[test]
fn dart_cap_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_ihara"))
        .args(["zeta", path(&data("k4.json"))])
        .env("ZETA_MAX_DARTS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tail_bound_violation_exits_4() {
    let out = ihara(&["tower", "--preset", "grigorchuk", "--depth", "3", "--series-order", "3", "--z", "0.1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bundle_build_and_decompose() {
    let r = report(&ihara(&["bundle", path(&data("prism_voltage.json")), "--build", "--decompose-check"]));
    assert_eq!(r["result"]["decompose_check"]["max_entry_deviation"], 0);
    assert_eq!(r["result"]["bundle"]["vertices"], 6);
    let r = report(&ihara(&["bundle", path(&data("moebius_voltage.json")), "--decompose-check"]));
    assert_eq!(r["result"]["decompose_check"]["max_entry_deviation"], 0);
    assert_eq!(r["result"]["decompose_check"]["distinct_voltages"], 2);
}

#[test]
fn cover_to_bundle() {
    let r = report(&ihara(&["bundle", "--cover-to-bundle", path(&data("c6_over_c3.json"))]));
    let c = &r["result"]["cover_to_bundle"];
    assert_eq!(c["group_order"], 2);
    assert_eq!(c["isomorphism"]["valid"], true);
    assert_eq!(c["bass_det_equal"], true);
    assert_eq!(ihara(&["bundle"]).status.code(), Some(2));
}

#[test]
fn dihedral_residuals() {
    let r = report(&ihara(&[
        "dihedral",
        "--base",
        path(&data("c3.json")),
        "--fiber-circulant",
        "4",
        "1",
        "3",
        "--samples",
        "20",
    ]));
    let samples = r["result"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 20);
    assert!(samples.iter().all(|s| num(&s["residual"]) < 1e-9));
    assert_eq!(r["result"]["factor_count"], 3);
    assert!(samples.iter().all(|s| !s["h"].is_null()));
}

#[test]
fn dihedral_rejects_non_dihedral_voltage_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.json");
    // a transposition is not an automorphism of C5
    std::fs::write(&map, r#"{"0": [1, 0, 2, 3, 4]}"#).unwrap();
    let out = ihara(&[
        "dihedral",
        "--base",
        path(&data("c3.json")),
        "--fiber-circulant",
        "5",
        "1",
        "4",
        "--voltages",
        map.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grigorchuk_tower_csv() {
    let out = ihara(&["tower", "--preset", "grigorchuk", "--depth", "10", "--z", "0.05"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest {"));
    assert_eq!(lines.next().unwrap(), "level,vertices,value_re,value_im,diff_prev,certified_radius");
    assert!(lines.next().unwrap().starts_with("# z=0.05,0.0"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[9][1], "1024");
    assert_eq!(rows[0][4], "");
    let diffs: Vec<f64> = rows[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(diffs[4..].windows(2).all(|w| w[1] < w[0]));
    let radii: Vec<usize> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["tower", "--preset", "cycles", "--depth", "5", "--z", "0.3,0.1+0.1i", "--emit", "json"],
        vec!["dihedral", "--base", path(&data("c3.json")), "--fiber-circulant", "5", "1", "4", "--seed", "9"],
    ] {
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        for p in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--out", p.to_str().unwrap()]);
            let out = ihara(&full);
            assert!(out.status.success());
            assert!(String::from_utf8_lossy(&out.stdout).contains("wall time"));
        }
        let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(x, y);
        assert!(!String::from_utf8_lossy(&x).contains("wall"));
    }
}
