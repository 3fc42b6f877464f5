use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embedhom"))
        .args(args)
        .env_remove("EMBEDHOM_VERTEX_CAP")
        .env_remove("EMBEDHOM_AMBIENT_CAP")
        .output()
        .expect("binary runs")
}

fn result(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--result-only");
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn homology_of_hollow_triangle() {
    let r = result(&["homology", &path("hollow_triangle.json"), "--kind", "inf"]);
    assert_eq!(r["betti"], serde_json::json!({ "0": 1, "1": 1 }));
    assert_eq!(r["inf_sup_iso"], true);
    assert_eq!(r["field"], "Q");
}

#[test]
fn group_tables() {
    let expected = [(1, 6, 1, 6), (2, 8, 4, 2), (3, 4, 4, 1), (4, 4, 2, 2)];
    for (case, homeo, stab, aut) in expected {
        let r = result(&["aut", &path(&format!("groups_case{case}.json"))]);
        assert_eq!(
            (r["homeo_order"].as_u64(), r["stab_order"].as_u64(), r["aut_order"].as_u64()),
            (Some(homeo), Some(stab), Some(aut)),
            "case {case}"
        );
    }
}

#[test]
fn bundle_order_values() {
    assert_eq!(result(&["bundle-order", "--space", "surface", "--genus", "1", "--n", "4"])["divides"], 4);
    assert_eq!(result(&["bundle-order", "--space", "sphere", "--m", "2", "--n", "2"])["divides"], 4);
    assert_eq!(result(&["bundle-order", "--space", "euclidean", "--m", "3", "--n", "3"])["divides"], 12);
    assert_eq!(result(&["embed-bound", "--t", "2", "--k", "2"])["bound"], 4);
}

#[test]
fn projective_bound_reports_reference_dimension() {
    let out = run(&["bundle-order", "--space", "rp", "--m", "2", "--n", "3"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["warnings"].as_array().unwrap().len(), 1);
    let missing = run(&["bundle-order", "--space", "rp", "--m", "9", "--n", "3"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn report_envelope_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&["quasi-check", &path("directed_cycle.json"), "--output", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["schema"], "embedhom.report/1");
    assert_eq!(report["command"], "quasi-check");
    assert_eq!(report["result"]["report"]["is_iso"], true);
    assert!(report["elapsed_ms"].is_number());
}

#[test]
fn payload_is_deterministic() {
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(run(&["four-term", &path("groups_case1.json")]));
    let b = strip(run(&["four-term", &path("groups_case1.json")]));
    assert_eq!(a, b);
    let s1 = strip(run(&["selftest", "--seed", "9", "--quick"]));
    let s2 = strip(run(&["selftest", "--seed", "9", "--quick"]));
    assert_eq!(s1, s2);
}

#[test]
fn prime_fields() {
    let r = result(&["homology", &path("hollow_triangle.json"), "--field", "Z/3"]);
    assert_eq!(r["field"], "Z/3");
    assert_eq!(r["betti"]["1"], 1);
    let bad = run(&["homology", &path("hollow_triangle.json"), "--field", "Z/4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn quotient_and_closure_commands() {
    let r = result(&["quotient-check", &path("groups_case4.json")]);
    assert_eq!(r["report"]["surjective"], true);
    assert_eq!(r["report"]["is_quasi_iso"], true);
    let c = result(&["closure", &path("groups_case2.json"), "--op", "delta"]);
    assert_eq!(c["edge_count"], 6);
    let up = result(&["closure", &path("groups_case3.json"), "--op", "upper"]);
    // supersets of {0,1} inside {0,1,2,3}
    assert_eq!(up["edge_count"], 4);
}

#[test]
fn persistence_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let bars = dir.path().join("bars.json");
    let r = result(&[
        "persist",
        &path("equilateral.json"),
        "--n-max",
        "2",
        "--csv",
        csv.to_str().unwrap(),
        "--barcode",
        bars.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("degree,r_i,r_j,beta_i,beta_j,rank\n"));
    assert!(text.lines().any(|l| l == "0,2,0.5,3,1,1"));
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&bars).unwrap()).unwrap();
    let degree_one: Vec<&Value> = b["bars"].as_array().unwrap().iter().filter(|x| x["degree"] == 1).collect();
    assert_eq!(degree_one.len(), 1);
    assert_eq!(degree_one[0]["death_step"], Value::Null);
    assert_eq!(r["steps"].as_array().unwrap().len(), 2);
}

#[test]
fn isometries_of_a_square() {
    let r = result(&["isom", &path("square.csv"), "--hypergraph", &path("groups_case2.json")]);
    assert_eq!(r["isom_order"], 8);
    assert_eq!(r["hypergraph"]["normal"], true);
}

#[test]
fn circle_sample_persists() {
    let r = result(&["persist", &path("circle12.json"), "--n-max", "3", "--max-degree", "0", "--consecutive"]);
    assert_eq!(r["metric"], "circle");
    assert_eq!(r["barcode"], Value::Null);
    let both = run(&["persist", &path("circle12.json"), "--consecutive", "--barcode", "/tmp/never.json"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_vertex = dir.path().join("bad.json");
    std::fs::write(&bad_vertex, r#"{"vertices":[0],"edges":[[0,1]]}"#).unwrap();
    assert_eq!(run(&["homology", bad_vertex.to_str().unwrap()]).status.code(), Some(2));
    let truncated = dir.path().join("trunc.json");
    std::fs::write(&truncated, "{\n \"vertices\": [0,").unwrap();
    let out = run(&["aut", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(run(&["homology", "/nonexistent/file.json"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_embedhom"))
        .args(["aut", &path("groups_case1.json")])
        .env("EMBEDHOM_VERTEX_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let too_wide = run(&["quotient-check", &path("groups_case1.json"), "--ambient-cap", "2"]);
    assert_eq!(too_wide.status.code(), Some(3));
}

#[test]
fn duplicate_edges_warn() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.json");
    std::fs::write(&dup, r#"{"vertices":[0,1],"edges":[[0,1],[1,0]]}"#).unwrap();
    let out = run(&["closure", dup.to_str().unwrap()]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn matrices_export() {
    let dir = tempfile::tempdir().unwrap();
    let r = result(&[
        "homology",
        &path("hollow_triangle.json"),
        "--kind",
        "ambient",
        "--export-matrices",
        dir.path().to_str().unwrap(),
    ]);
    assert!(r["exported"].as_array().unwrap().len() >= 3);
    let d1 = std::fs::read_to_string(dir.path().join("boundary_1.txt")).unwrap();
    assert_eq!(d1.lines().filter(|l| !l.starts_with('%')).count(), 6);
}

#[test]
fn selftest_quick_passes() {
    let r = result(&["selftest", "--seed", "1", "--quick"]);
    assert!(r["suites"].as_array().unwrap().iter().all(|s| s["failures"] == 0));
}
