use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quatf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn grid_file(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn verify_paper_passes_every_item() {
    let out = quatf(&["--json", "verify-paper"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["errors"], 0);
    let items = v["items"].as_array().unwrap();
    assert!(items.len() >= 40);
    assert!(items.iter().all(|i| i["status"] == "pass"));
    let ids: Vec<&str> = items.iter().map(|i| i["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn injected_generator_faults_are_caught() {
    for g in ["E1", "E3"] {
        let out = quatf(&["--json", "verify-paper", "--inject-fault", g]);
        assert_eq!(code(&out), 3, "fault in {g}");
        let v = json(&out);
        let oracle = v["items"]
            .as_array()
            .unwrap()
            .iter()
            .find(|i| i["id"] == "07-lemma-oracle")
            .unwrap();
        assert_eq!(oracle["status"], "fail", "fault in {g}");
    }
}

#[test]
fn insufficient_precision_reports_errors() {
    let out = quatf(&["--json", "verify-paper", "--prec", "4"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert!(v["errors"].as_u64().unwrap() > 0);
    assert_eq!(v["failed"], 0);
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["--json", "flag", "--n", "3", "--lines", "1,2"][..],
        &["--json", "series", "--which", "ell", "--deg", "3", "--prec", "10"][..],
        &["--json", "verify-paper"][..],
    ] {
        let (a, b) = (quatf(args), quatf(args));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn flag_report_for_sp3() {
    let v = json(&quatf(&["--json", "flag", "--n", "3", "--lines", "1,2"]));
    assert_eq!(v["classification"], "+beta_{4/2,2}");
    assert_eq!(v["torsion_order"], "4");
    assert_eq!(v["oracle_congruent"], true);
    assert_eq!(v["filtration"], 10);
    let v = json(&quatf(&["--json", "flag", "--n", "3", "--lines", "2,1"]));
    assert_eq!(v["classification"], "-beta_{4/2,2}");
    let v = json(&quatf(&["--json", "flag", "--n", "4", "--lines", "1,3"]));
    assert_eq!(v["classification"], "0");
    assert_eq!(v["representative"].as_array().unwrap().len(), 0);
}

#[test]
fn f_transfer_from_grid_file() {
    let path = grid_file("n2.json", r#"{"n": 2, "level": 3, "pairings": [0, "1", 0]}"#);
    let out = quatf(&["--json", "f-transfer", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classification"], "beta_{4/4}");
    assert_eq!(v["torsion_order"], "2");
    assert_eq!(v["input"]["pairings"], serde_json::json!(["0", "1", "0"]));
    let rep = v["representative"].as_array().unwrap();
    assert_eq!(rep.len(), 1);
    assert_eq!(rep[0]["weight"], 4);
    assert_eq!(rep[0]["expansion"][0], "1/57600");
    assert_eq!(rep[0]["expansion"][1], "1/240");

    let path = grid_file("bad12.json", r#"{"n": 3, "pairings": [0, 1, 0, 0]}"#);
    let v = json(&quatf(&["--json", "f-transfer", "--input", path.to_str().unwrap()]));
    let checks: Vec<&str> = v["validation"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["check"].as_str().unwrap())
        .collect();
    assert!(checks.contains(&"mod-12"));
}

#[test]
fn small_commands() {
    let v = json(&quatf(&["--json", "eis", "--name", "E1", "--prec", "5"]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "6", "0", "6", "6"]));
    let v = json(&quatf(&["--json", "eis", "--level", "2", "--name", "delta4", "--prec", "4"]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "24", "24", "96"]));
    let v = json(&quatf(&["--json", "e-transfer", "--n", "1", "--index", "1"]));
    assert_eq!(v["e"], "239/240");
    let v = json(&quatf(&["--json", "reduce-cohomology", "--n", "3", "--poly", "t1*t2^2"]));
    assert_eq!(v["normal_form"], "-t1^2*t2");
    assert_eq!(v["pairing"], "-1");
    let v = json(&quatf(&["--json", "series", "--which", "ell0", "--level", "2", "--deg", "2"]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-1/6", "1/240"]));
}

#[test]
fn invalid_input_exits_with_two() {
    let missing = grid_file("short.json", r#"{"n": 3, "pairings": [0, 1]}"#);
    let malformed = grid_file("malformed.json", "{\"n\": 3,");
    let fractional = grid_file("frac.json", r#"{"n": 1, "pairings": [0.5, 1]}"#);
    for args in [
        &["flag", "--n", "3", "--lines", "1,1"][..],
        &["flag", "--n", "3", "--lines", "1,4"][..],
        &["flag", "--n", "3", "--lines", "1,2", "--level", "5"][..],
        &["eis", "--name", "E5"][..],
        &["eis", "--level", "2", "--name", "E1"][..],
        &["series", "--which", "oracle", "--level", "2", "--deg", "2"][..],
        &["series", "--which", "ell", "--deg", "0"][..],
        &["reduce-cohomology", "--n", "3", "--poly", "t4"][..],
        &["e-transfer", "--n", "0", "--index", "1"][..],
        &["f-transfer", "--input", "/nonexistent/grid.json"][..],
        &["f-transfer", "--input", missing.to_str().unwrap()][..],
        &["f-transfer", "--input", malformed.to_str().unwrap()][..],
        &["f-transfer", "--input", fractional.to_str().unwrap()][..],
        &["verify-paper", "--inject-fault", "E7"][..],
        &["no-such-command"][..],
    ] {
        let out = quatf(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}
