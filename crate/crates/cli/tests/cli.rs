use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn aj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aj")).args(args).output().expect("run aj")
}

fn aj_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_aj"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn aj");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_genus_one() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = aj(&["construct", "--fixture-points", "0:1", "--target", "t", "--order", "2", "--out", path_str(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["cycle"].as_array().unwrap().len(), 1);

    let check = aj(&["verify", "--report", path_str(&report)]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["all_pass"], true);
}

#[test]
fn construct_genus_two_two_variables() {
    let out = aj(&[
        "construct", "--fixture-points", "1:2,2:3", "--target", "t1 - 3/2*t1*t2; t2^2 + 5*t1", "--vars", "2", "--order", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], serde_json::json!([true, true]));
    assert_eq!(v["curve"]["s_coeffs"], serde_json::json!(["29", "-26", "0", "0", "0", "1"]));
}

#[test]
fn corrupted_report_fails_verification() {
    let out = aj(&["construct", "--curve", "29,-26,0,0,0,1", "--target", "t; 0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v = json(&out);
    v["cycle"][0]["arc"]["displacement"][0]["numerator"] = Value::String("7".into());
    let check = aj_stdin(&["verify"], &v.to_string());
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(json(&check)["all_pass"], false);
}

#[test]
fn validation_and_parse_errors_exit_two() {
    let out = aj(&["construct", "--fixture-points", "0:1", "--target", "t", "--order", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("order"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("curve.json");
    std::fs::write(&bad, "{\"s_coeffs\": [\"1\", ").unwrap();
    let out = aj(&["construct", "--curve", path_str(&bad), "--target", "t"]);
    assert_eq!(out.status.code(), Some(2));

    let out = aj(&["construct", "--curve", "1,0,1", "--target", "t"]);
    assert_eq!(out.status.code(), Some(2));

    // y^2 = x^3 - x has no usable rational points.
    let out = aj(&["construct", "--curve", "0,-1,0,1", "--target", "t", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rational points"));
}

#[test]
fn stdin_run_config() {
    let cfg = r#"{"fixture_points": [{"x": "1", "y": "2"}, {"x": "2", "y": "3"}],
                 "target": {"h": [[{"exponents": [1], "numerator": "1", "denominator": "1"}], []]},
                 "vars": 1, "order": 3}"#;
    let out = aj_stdin(&["construct", "--stdin"], cfg);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], serde_json::json!([true, true]));
    assert_eq!(v["cycle"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["construct", "--fixture-points", "1:2,2:3,3:5", "--target", "t1;t2;t1*t2", "--vars", "2", "--seed", "9"];
    let a = aj(&args);
    let b = aj(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn forms_info_examples() {
    let v = json(&aj(&["forms-info", "--vars", "1", "--order", "3", "--degree", "1"]));
    assert_eq!((v["dim_total"].as_u64(), v["dim_exact"].as_u64()), (Some(2), Some(2)));
    let v = json(&aj(&["forms-info", "--vars", "2", "--order", "2", "--degree", "1"]));
    assert_eq!(
        (v["dim_total"].as_u64(), v["dim_closed"].as_u64(), v["dim_exact"].as_u64()),
        (Some(3), Some(2), Some(2))
    );
    let v = json(&aj_stdin(&["forms-info", "--stdin"], r#"{"vars": 1, "order": 2, "degree": 0}"#));
    assert_eq!(v["dim_total"].as_u64(), Some(2));
    assert_eq!(aj(&["forms-info", "--vars", "0"]).status.code(), Some(2));
}

fn unit_flow(entry: &str) -> String {
    format!(
        r#"{{"vars": 1, "order": 4, "matrix": [[{entry}]],
            "rhs": [[{{"exponents": [0], "numerator": "1", "denominator": "1"}}]]}}"#
    )
}

#[test]
fn flow_examples() {
    let one = r#"[{"exponents": [0], "numerator": "1", "denominator": "1"}]"#;
    let out = aj_stdin(&["flow"], &unit_flow(one));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["solution"]["phi"],
        serde_json::json!([[{"exponents": [1], "numerator": "1", "denominator": "1"}]])
    );

    let one_plus_u = r#"[{"exponents": [0], "numerator": "1", "denominator": "1"},
                         {"exponents": [1], "numerator": "1", "denominator": "1"}]"#;
    let out = aj_stdin(&["flow"], &unit_flow(one_plus_u));
    assert_eq!(out.status.code(), Some(0));
    let phi: Vec<(u64, String)> = json(&out)["solution"]["phi"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["exponents"][0].as_u64().unwrap(), format!("{}/{}", t["numerator"].as_str().unwrap(), t["denominator"].as_str().unwrap())))
        .collect();
    assert_eq!(phi, vec![(1, "1/1".to_string()), (2, "-1/2".to_string()), (3, "1/2".to_string())]);

    let u = r#"[{"exponents": [1], "numerator": "1", "denominator": "1"}]"#;
    assert_eq!(aj_stdin(&["flow"], &unit_flow(u)).status.code(), Some(2));
}

#[test]
fn points_selection() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sel.json");
    let out = aj(&["points", "--fixture-points", "1:2,2:3,3:5", "--bound", "3", "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["selection"]["sites"].as_array().unwrap().len(), 3);
    assert_eq!(v["selection"]["minors"].as_array().unwrap().len(), 3);
    assert_ne!(v["selection"]["determinant"], "0");
}

#[test]
fn selftest_passes() {
    let out = aj(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["all_pass"], true);
}
