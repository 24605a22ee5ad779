use std::process::{Command, Output};

use fibre_cli::report::{Document, PipelineJson, SCHEMA};
use serde_json::Value;

fn fibre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibre"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn genus_thirteen_dot() {
    let o = fibre(&["genus", "--builtin", "genus13", "--emit-dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=\"C")).count(), 5);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 10);
}

#[test]
fn empty_configuration_dot() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("empty.json");
    std::fs::write(&path, r#"{"components": []}"#).unwrap();
    let o = fibre(&["genus", "--config", path.to_str().unwrap(), "--emit-dot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "graph \"fibre\" {\n}\n");
}

#[test]
fn genus_json_from_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("two.json");
    std::fs::write(
        &path,
        r#"{"components": [{"id": 0, "mult": 2}, {"id": 1, "mult": 3}], "intersections": [[0, 1, 6]]}"#,
    )
    .unwrap();
    let o = fibre(&["genus", "--config", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["genus"], 11);
    assert_eq!(v["result"]["predicates"]["c_fibre"], true);
    assert_eq!(v["result"]["configuration"]["components"][0]["self_int"], -9);
}

#[test]
fn resolution_dot_has_one_node_per_step() {
    let branch = "t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)";
    let json = fibre(&["resolve", "--branch", branch]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let steps = v["result"]["steps"].as_array().unwrap().len();
    assert_eq!(steps, 12);
    let dot = stdout(&fibre(&["resolve", "--branch", branch, "--emit-dot"]));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), steps);
}

#[test]
fn pipeline_round_trip_and_determinism() {
    let args = ["pipeline", "--preset", "type1", "--base-change", "2", "--quiet"];
    let a = fibre(&args);
    let b = fibre(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());
    let text = stdout(&a);
    let doc: Document<PipelineJson> = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.schema, SCHEMA);
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(again, text);
    let inv = doc.result.invariants.unwrap();
    assert_eq!((inv.chi, inv.k2, inv.c2), (3, 4, 32));
    assert_eq!(inv.exception_family.as_deref(), Some("(2,2,2,2)"));
    assert!(no_floats(&serde_json::from_str(&text).unwrap()));
}

#[test]
fn summary_goes_to_stderr_unless_quiet() {
    let o = fibre(&["pipeline", "--preset", "type1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("fibre [0:1]: genus 2"));
    serde_json::from_str::<Value>(&stdout(&o)).unwrap();
}

#[test]
fn type_three_exits_with_discrepancy() {
    let o = fibre(&["pipeline", "--preset", "type3", "--base-change", "2", "--quiet"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let codes: Vec<&str> = v["claim_notes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["code"].as_str().unwrap())
        .collect();
    assert!(codes.contains(&"bidegree-parity"));
    assert!(codes.contains(&"bidegree-claim"));
    assert!(v["result"]["invariants"].is_null());
}

#[test]
fn odd_type_four_is_a_precondition_failure() {
    let o = fibre(&["pipeline", "--preset", "type4", "--h", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("h must be even"));
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(fibre(&["classify", "--mults", "1,3"]).status.code(), Some(2));
    assert_eq!(fibre(&["pipeline", "--preset", "type9"]).status.code(), Some(2));
    assert_eq!(
        fibre(&["track", "--preset", "type1", "--point", "5:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn classify_json() {
    let v: Value = serde_json::from_str(&stdout(&fibre(&["classify", "--mults", "2,3,6"]))).unwrap();
    assert_eq!(v["result"]["degree"], "0");
    assert_eq!(v["result"]["classification"], "special");
    assert_eq!(v["result"]["exception_family"], "(2,3,k)");
    let v: Value = serde_json::from_str(&stdout(&fibre(&["classify", "--mults", "2,3,7"]))).unwrap();
    assert_eq!(v["result"]["degree"], "1/42");
    assert!(v["result"].get("exception_family").is_none());
}

#[test]
fn even_template_track_flags_genus_claim() {
    let o = fibre(&[
        "track",
        "--preset",
        "even:4",
        "--template-mode",
        "--emit-json",
        "--emit-dot",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["genus"], 5);
    assert_eq!(v["result"]["tails"], 4);
    assert!(v["result"]["dot"].as_str().unwrap().starts_with("graph "));
    assert!(v["claim_notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n["code"] == "genus-claim"));
}

#[test]
fn search_csv() {
    let o = fibre(&[
        "search",
        "--two-component",
        "--max-mult",
        "5",
        "--max-int",
        "12",
        "--max-genus",
        "11",
        "--csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mults,matrix,genus,flags"));
    assert_eq!(lines.next(), Some("2;3,-9;6;6;-4,11,winters|connected|c-fibre"));
    assert_eq!(lines.next(), None);
}
