use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn tnv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnv"))
        .args(args)
        .env_remove("TNV_MAX_CELLS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn passing_suite_exits_zero() {
    let out = tnv(&["suite", "sums", "--n", "6", "--p", "2", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schemaVersion"], 1);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["summary"]["passed"], report["summary"]["total"]);
    assert_eq!(report["summary"]["maxResidual"], 0.0);
}

#[test]
fn unknown_suite_exits_two() {
    let out = tnv(&["suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn violation_exits_one() {
    // two frequencies 1/1000 apart: at radius 100 the order function is far
    // from its asymptotic slope, so the numerical check fails
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("close.csv");
    fs::write(&points, "0,0\n1/1000,0\n").unwrap();
    let out = tnv(&["suite", "expcurve", "--points", points.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert!(report["summary"]["passed"].as_u64() < report["summary"]["total"].as_u64());
}

#[test]
fn cap_exits_three_with_partial_report() {
    let out = Command::new(env!("CARGO_BIN_EXE_tnv"))
        .args(["suite", "tableaux", "--n", "5", "--p", "3"])
        .env("TNV_MAX_CELLS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert!(report["resourceCap"].is_string());
    assert!(report["summary"]["total"].as_u64().unwrap() > 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = tnv(&["suite", "all", "--n", "3", "--trials", "4", "--seed", "11", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn table_goes_to_stdout_and_json_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = tnv(&["suite", "tableaux", "--n", "4", "--p", "2", "--format", "csv", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("inputs,computed,expected,residual,pass\n"));
    let saved: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved["suite"], "tableaux");
}

#[test]
fn tableaux_writes_edge_sum_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("tab.json");
    let out = tnv(&["tableaux", "--n", "4", "--p", "2", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let edge = fs::read_to_string(dir.path().join("tab.edge_sums.csv")).unwrap();
    assert!(edge.contains("empty_box,0,21,"));
    assert!(edge.contains("ball,4,14,"));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let phi: Vec<&str> = report["tableauProfile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["enumerated"].as_str().unwrap())
        .collect();
    assert_eq!(phi, ["14", "28", "42", "21"]);
}

#[test]
fn sums_verify_shape() {
    let out = tnv(&["sums", "verify", "--n", "5", "--p", "2", "--trials", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["identity"], "balanced");
    assert_eq!(v["trials"], 20);
    assert_eq!(v["max_abs_residual"], 0.0);
    let all = tnv(&["sums", "verify", "--n", "4", "--p", "2", "--trials", "5", "--identity", "all"]);
    assert_eq!(json(&all).as_array().unwrap().len(), 8);
    assert_eq!(tnv(&["sums", "verify", "--n", "2", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn expcurve_subcommands() {
    for args in [
        vec!["expcurve", "perimeters", "--p", "2"],
        vec!["expcurve", "minkowski"],
        vec!["expcurve", "peculiar", "--p", "2", "--i", "3"],
        vec!["expcurve", "sharpness", "--n", "4"],
        vec!["expcurve", "slope", "--p", "2"],
    ] {
        let out = tnv(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        for check in json(&out).as_array().unwrap() {
            for field in ["quantity", "value", "bound", "pass"] {
                assert!(check.get(field).is_some(), "{args:?} lacks {field}");
            }
        }
    }
    let out = tnv(&["expcurve", "perimeters", "--format", "markdown"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("| quantity | value | bound | pass |"));
}

#[test]
fn wedge_subcommands() {
    let out = tnv(&["wedge", "pluecker", "--curve", r#"[["1"],["0","1"],["0","0","1"]]"#, "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let coords = json(&out);
    assert_eq!(coords["0,1"], serde_json::json!(["1"]));
    assert_eq!(coords["1,2"], serde_json::json!(["0", "0", "1"]));

    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("cusp.json");
    fs::write(&curve, r#"[[1], ["0","0","1"], ["0","0","0","1"]]"#).unwrap();
    let out = tnv(&["wedge", "stationary", "--curve", curve.to_str().unwrap()]);
    assert_eq!(json(&out)["delta"], serde_json::json!([0, 2, 3]));

    let out = tnv(&["wedge", "derivative", "--p", "2", "--i", "2"]);
    assert_eq!(json(&out)["0,3"], 1);

    let flat = tnv(&["wedge", "stationary", "--curve", r#"[["1"],["2"]]"#]);
    assert_eq!(flat.status.code(), Some(2));
}

#[test]
fn diagrams_listing() {
    let out = tnv(&["diagrams", "--n", "3", "--p", "2"]);
    let v = json(&out);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 5);
    let total: usize = levels.iter().map(|l| l["tuples"].as_array().unwrap().len()).sum();
    assert_eq!(total, 6);
}
