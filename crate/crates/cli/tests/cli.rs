use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn schema() -> jsonschema::JSONSchema {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "schema", "run_report.schema.json"].iter().collect();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

/// Rows of a CSV report after the header.
fn csv_rows(o: &Output) -> (String, Vec<Vec<String>>) {
    let s = stdout(o);
    let mut lines = s.lines();
    let header = lines.next().unwrap().to_string();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

#[test]
fn basis_element_reduces_to_a_unit_vector() {
    let o = run(&["reduce", "--file", &data("wheel2.diag"), "--space", "B@x", "--degree", "3", "--format", "json"]);
    assert!(o.status.success());
    let coords: Vec<String> = serde_json::from_value(json(&o)["outputs"]["coords"].clone()).unwrap();
    assert_eq!(coords.iter().filter(|c| *c == "1").count(), 1);
    assert!(coords.iter().all(|c| c == "1" || c == "0"));
}

#[test]
fn as_image_reduces_to_zero() {
    let o = run(&["reduce", "--file", &data("as_image.diag"), "--space", "B@x", "--degree", "3", "--format", "csv"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "n,degree,value");
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[2] == "0"));
}

#[test]
fn malformed_file_exits_2_with_location() {
    let o = run(&["reduce", "--file", &data("malformed.diag"), "--space", "B@x", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("malformed.diag:3:"), "{err}");
}

#[test]
fn missing_file_and_bad_space_are_input_errors() {
    assert_eq!(run(&["reduce", "--file", "/nonexistent.diag", "--space", "B@x", "--degree", "2"]).status.code(), Some(2));
    let o = run(&["reduce", "--file", &data("wheel2.diag"), "--space", "Q@x", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["tables", "xset", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn linking_invert_reports_delta_and_certificate() {
    let o = run(&["linking", "invert", "--g", "1", "--U", "[[0]]", "--V", "[[1]]", "--W", "[[1]]", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert!(schema().is_valid(&v));
    let out = &v["outputs"];
    assert_eq!(out["delta"], "-2*t^-1 + 5 - 2*t");
    assert_eq!(out["certificate"]["leading"], serde_json::json!(["-1", "1"]));
    assert_eq!(out["certificate"]["r"], "-3/2");
    assert_eq!(v["certificates"].as_array().unwrap().len(), 5);
}

#[test]
fn linking_input_errors() {
    let o = run(&["linking", "invert", "--U", "[[0,1],[2,0]]", "--V", "[[0,0],[0,0]]", "--W", "[[0,0],[0,0]]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["linking", "invert", "--U", "[[0]", "--V", "[[0]]", "--W", "[[0]]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["linking", "invert", "--g", "2", "--U", "[[0]]", "--V", "[[0]]", "--W", "[[0]]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn two_loop_table_csv() {
    let o = run(&["tables", "two-loop", "--a", "2", "--b1", "1", "--b2", "0", "--format", "csv"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "a,b1,b2,name,value");
    let get = |n: &str| rows.iter().find(|r| r[3] == n).unwrap()[4].clone();
    // (28*2 - 5) / (16*2 - 4) and (12*2 - 1) / (32*2 - 8)
    assert_eq!(get("p"), "51/28");
    assert_eq!(get("q"), "23/56");
    assert_eq!(get("det"), "28/3");
}

#[test]
fn two_loop_rejects_bad_rationals() {
    let o = run(&["tables", "two-loop", "--a", "-3", "--b1", "1/0", "--b2", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["tables", "two-loop", "--a", "-3", "--b1", "-1/2", "--b2", "3"]);
    assert!(o.status.success());
}

#[test]
fn theta_count_and_crude_bound_tables() {
    let o = run(&["tables", "theta-count", "--g", "1..5", "--format", "csv"]);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "g,value");
    let vals: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(vals, ["3", "8", "15", "24", "35"]);
    let o = run(&["tables", "crude-bound", "--n", "2", "--g", "1..4", "--format", "csv"]);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "n,g,m,value");
    let vals: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(vals, ["686", "1458", "2662", "4394"]);
    assert_eq!(run(&["tables", "crude-bound", "--n", "9", "--g", "1"]).status.code(), Some(3));
}

#[test]
fn xset_table() {
    let o = run(&["tables", "xset", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["outputs"].as_array().unwrap().len(), 11);
    assert!(v["certificates"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn sl2_weights_with_oracle() {
    let o = run(&["weights", "sl2", "--diagram", &data("theta.json"), "--oracle", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["outputs"]["sum"][0]["weight"]["text"], "12 [h^1]");
    assert_eq!(v["certificates"][0]["pass"], true);
}

#[test]
fn resource_cutoffs_exit_3() {
    let o = run(&["weights", "sl2", "--diagram", &data("theta.json"), "--max-vertices", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["spaces", "dump", "--space", "B@x", "--degree", "9"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn clasper_difference_report() {
    let o = run(&["aarhus", "clasper", "--linking", &data("linking_g1.json"), "--clasper", &data("clasper.diag"), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(schema().is_valid(&v));
    assert_eq!(v["outputs"]["r"], "-3/2");
    assert!(v["certificates"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn integrate_projects_to_three_loops() {
    let o = run(&[
        "aarhus", "integrate", "--linking", &data("linking_g1.json"), "--p", &data("clasper.diag"), "--loop", "3",
        "--truncate", "4", "--format", "json",
    ]);
    assert!(o.status.success());
    let terms = json(&o)["outputs"]["terms"].as_array().unwrap().clone();
    assert!(!terms.is_empty());
    assert!(terms.iter().all(|t| t["loops"] == 3 && t["degree"].as_u64().unwrap() <= 4));
}

#[test]
fn spaces_dump_lists_a_basis() {
    let o = run(&["spaces", "dump", "--space", "Bn:2@h", "--degree", "5", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["outputs"]["dims"], serde_json::json!([0, 1, 0, 1, 0, 1]));
    assert_eq!(v["outputs"]["basis"].as_array().unwrap().len(), 3);
    assert!(schema().is_valid(&v));
}

#[test]
fn reproduce_theta_count() {
    let o = run(&["reproduce", "theta-count"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for (g, c) in [(1, 3), (2, 8), (3, 15), (4, 24)] {
        assert!(s.contains(&format!("PASS g = {g}: count = g^2 + 2g: {c}")), "{s}");
    }
    assert!(!s.contains("FAIL"));
}

#[test]
fn reproduce_sections_pass_and_are_deterministic() {
    let schema = schema();
    for section in ["two-loop", "appendixB", "appendixA", "crude-bound", "xset"] {
        let a = run(&["reproduce", section, "--seed", "7", "--format", "json"]);
        assert!(a.status.success(), "{section}: {}", stdout(&a));
        let v = json(&a);
        assert!(schema.is_valid(&v), "{section}");
        assert!(v["certificates"].as_array().unwrap().iter().all(|c| c["pass"] == true));
        if section == "appendixB" {
            let b = run(&["reproduce", section, "--seed", "7", "--format", "json"]);
            assert_eq!(a.stdout, b.stdout);
        }
    }
}

#[test]
fn reproduce_csv_lists_checks() {
    let o = run(&["reproduce", "xset", "--format", "csv"]);
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, "check,value,detail");
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] == "PASS"));
}
