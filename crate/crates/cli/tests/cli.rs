use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn gridcable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcable")).args(args).output().expect("run gridcable")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn unknot_invariants() {
    let out = gridcable(&["invariants", path_str(&corpus("unknot.grid"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"tb":-1,"r":0,"sl":-1}"#);
}

#[test]
fn cable_then_validate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("cable.grid");
    let out = gridcable(&["cable", path_str(&corpus("unknot.grid")), "--p", "2", "--out", path_str(&grid)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cable.json")).unwrap()).unwrap();
    for key in ["p", "q", "plan", "stabilizations"] {
        assert!(sidecar.get(key).is_some(), "sidecar lacks {key}");
    }
    let v = gridcable(&["validate", path_str(&grid)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout_json(&v)["n"], 4);

    // A transverse cable that needs a pre-stabilization.
    let grid = dir.path().join("neg.grid");
    let out = gridcable(&["cable", path_str(&corpus("unknot.grid")), "--q", "-3", "--out", path_str(&grid)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reported = stdout_json(&out);
    assert_eq!(reported["q"], -3);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("neg.json")).unwrap()).unwrap();
    assert!(!sidecar["stabilizations"].as_array().unwrap().is_empty());
    assert_eq!(gridcable(&["validate", path_str(&grid)]).status.code(), Some(0));
}

#[test]
fn verify_theorem1_on_trefoil() {
    let out = gridcable(&["verify", "theorem1", path_str(&corpus("trefoil.grid")), "--p", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["claim"], "theorem1");
    assert_eq!(v["verdict"], true);
    assert_eq!(v["report"]["companion"]["vanishes"], v["report"]["cable"]["vanishes"]);
    assert!(v.get("timings").is_some());
}

#[test]
fn failed_verification_exits_two() {
    // The local homotopy identity fails on the unknot 2-cable.
    let out = gridcable(&["verify", "identity3", path_str(&corpus("unknot.grid"))]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], false);
    assert!(v.get("witness").is_some());
}

#[test]
fn errors_exit_one_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grid");
    std::fs::write(&bad, "grid v1\nn=2\nX=0,1\nO=1,x\n").unwrap();
    let out = gridcable(&["validate", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let out = Command::new(env!("CARGO_BIN_EXE_gridcable"))
        .args(["tau", path_str(&corpus("trefoil.grid"))])
        .env("GRIDCABLE_MATERIALIZATION_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid size 5"));
}

#[test]
fn run_records_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        let path = dir.path().join(format!("run{i}.json"));
        let out = gridcable(&["--workers", workers, "--record", path_str(&path), "corpus", "run-all"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let mut record: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(record.as_object_mut().unwrap().remove("timings").is_some());
        records.push(serde_json::to_string(&record).unwrap());
    }
    assert_eq!(records[0], records[1]);
    let record: Value = serde_json::from_str(&records[0]).unwrap();
    let keys: Vec<&str> = record.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "input_digest", "parameters", "verdicts", "artifact_version", "digest"]);
    assert_eq!(record["verdicts"].as_array().unwrap().len(), 7);
}

#[test]
fn homology_json_schema() {
    let out = gridcable(&["homology", path_str(&corpus("unknot.grid"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["free"], serde_json::json!([{ "m2": -2, "a2": -2 }, { "m2": 0, "a2": 0 }]));
    assert_eq!(v["torsion"], serde_json::json!([]));
}
