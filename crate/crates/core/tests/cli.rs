use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn parabraid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parabraid")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn assert_schema_valid(v: &Value) {
    let schema: Value = serde_json::from_str(parabraid::report::REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn algebra_passes_with_exit_zero() {
    let out = parabraid(&["--json", "algebra", "--d", "3", "--pairs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_schema_valid(&v);
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        if c["kind"] == "residual" {
            assert!(c["value"].as_f64().unwrap() <= 1e-12);
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(parabraid(&["algebra", "--d", "1"]).status.code(), Some(2));
    assert_eq!(parabraid(&["algebra"]).status.code(), Some(2));
    assert_eq!(parabraid(&["solve", "--d", "9"]).status.code(), Some(2));
    assert_eq!(parabraid(&["gates", "--d", "3", "--braid", "1 x"]).status.code(), Some(2));
    assert_eq!(parabraid(&["gates", "--d", "3", "--braid", "9"]).status.code(), Some(2));
    assert_eq!(parabraid(&["--jobs", "0", "algebra", "--d", "2"]).status.code(), Some(2));
    assert_eq!(parabraid(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn leakage_exits_one() {
    let out = parabraid(&["gates", "--d", "3", "--braid", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("leak"));
}

#[test]
fn gates_shortcuts() {
    let gate = |d: &str, braid: &str| {
        let out = parabraid(&["--json", "gates", "--d", d, "--braid", braid]);
        assert_eq!(out.status.code(), Some(0), "{braid}");
        let v = json_of(&out);
        assert_schema_valid(&v);
        v["data"]["identification"]["gate"].as_str().unwrap().to_string()
    };
    // (C_X)^{-2} = C_X at d = 3
    assert_eq!(gate("3", "S"), "C_X");
    assert_eq!(gate("4", "T"), "C_Z^2");
    assert_eq!(gate("3", "S^-1"), "C_X^2");
    assert_eq!(gate("2", "F"), "F");
    // U1 U2 U1 restricts to F^3 = F† for d ≥ 3
    assert_eq!(gate("3", "F"), "F^3");
    assert_eq!(gate("3", "1 2 1"), "F^3");
}

#[test]
fn solve_qubit_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solve.json");
    let out = parabraid(&["solve", "--d", "2", "--restarts", "200", "--seed", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema_valid(&v);
    let nontrivial = v["data"]["clusters"].as_array().unwrap().iter().filter(|c| c["trivial"] == false).count();
    assert_eq!(nontrivial, 2);
    assert_eq!(v["seed"], 11);
}

#[test]
fn clifford_small_cases() {
    let out = parabraid(&["--json", "clifford", "--d", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_schema_valid(&v);
    assert_eq!(v["data"]["order"], 24);
    assert_eq!(v["data"]["matched_reference"], true);

    let out = parabraid(&["--json", "clifford", "--d", "3", "--generators", "reference"]);
    let v = json_of(&out);
    assert_eq!(v["data"]["order"], 216);
    assert_eq!(v["data"]["order_up_to_phases"], 24);
    assert_eq!(v["data"]["matched_reference_up_to_phases"], true);

    let out = parabraid(&["--json", "clifford", "--d", "3", "--limit", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["passed"], false);
}

#[test]
fn timings_are_opt_in() {
    let v = json_of(&parabraid(&["--json", "algebra", "--d", "2"]));
    assert!(v["elapsed_ms"].is_null());
    let v = json_of(&parabraid(&["--json", "--timings", "algebra", "--d", "2"]));
    assert!(v["elapsed_ms"].is_u64());
}

fn report_all(dir: &Path, name: &str) -> (Output, String, String) {
    let prefix = dir.join(name);
    let out = parabraid(&["--jobs", "2", "report-all", "--d-max", "2", "--seed", "5", "--restarts", "100", "--out", prefix.to_str().unwrap()]);
    let json = std::fs::read_to_string(prefix.with_extension("json")).unwrap();
    let md = std::fs::read_to_string(prefix.with_extension("md")).unwrap();
    (out, json, md)
}

#[test]
fn report_all_is_stable_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (out, a, md) = report_all(dir.path(), "a");
    let (_, b, _) = report_all(dir.path(), "b");
    assert_eq!(a, b);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_schema_valid(&v);
    assert_eq!(v["passed"], true);

    // one table row per relation present in the JSON
    let mut relations: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s["checks"].as_array().unwrap().iter().map(|c| c["relation"].as_str().unwrap()))
        .collect();
    relations.sort_unstable();
    relations.dedup();
    for r in &relations {
        assert_eq!(md.matches(&format!("| {r} |")).count(), 1, "{r}");
    }
    assert!(md.contains("**PASS**"));
}
