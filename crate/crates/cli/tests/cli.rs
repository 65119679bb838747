use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn troptheta(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_troptheta")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("troptheta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

#[test]
fn validate_exit_codes() {
    let (code, r) = troptheta(&["validate", &fixture("riemann_g1.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");

    let (code, r) = troptheta(&["validate", &fixture("degenerate.json")]);
    assert_eq!(code, 1);
    let problems = &check(&r, "polarization")["detail"]["problems"];
    assert!(problems.as_array().unwrap().iter().any(|p| p == "pairing degenerate"));

    let (code, r) = troptheta(&["validate", &fixture("malformed.json")]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("JSON"));

    let (code, _) = troptheta(&["validate", &fixture("no_such_file.json")]);
    assert_eq!(code, 2);
}

#[test]
fn validate_non_archimedean() {
    let (code, r) = troptheta(&["validate", &fixture("na_g2_level2.json")]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(check(&r, "cocycle_identity")["status"], "pass");
    assert_eq!(check(&r, "invariance")["status"], "pass");
}

#[test]
fn eval_riemann_g1() {
    let (code, r) = troptheta(&["eval", &fixture("riemann_g1.json"), "0", "-3/2", "1"]);
    assert_eq!(code, 0);
    let d = &check(&r, "f(0/1)")["detail"];
    assert_eq!(d["value"], "0/1");
    assert_eq!(d["witnesses"], serde_json::json!([[0]]));
    let d = &check(&r, "f(-3/2)")["detail"];
    assert_eq!(d["value"], "-1/2");
    assert_eq!(d["witnesses"], serde_json::json!([[1]]));
    let d = &check(&r, "f(1/1)")["detail"];
    assert_eq!(d["witnesses"], serde_json::json!([[-1], [0]]));

    let (code, _) = troptheta(&["eval", &fixture("riemann_g1.json"), "1,2"]);
    assert_eq!(code, 2);
}

#[test]
fn riemann_of_non_archimedean_periods() {
    let (code, r) = troptheta(&["riemann", &fixture("na_g2.json"), "1/2,-1/3"]);
    assert_eq!(code, 0);
    let (_, direct) = troptheta(&["eval", &fixture("riemann_g2.json"), "1/2,-1/3"]);
    assert_eq!(check(&r, "f(1/2,-1/3)")["detail"], check(&direct, "f(1/2,-1/3)")["detail"]);
}

#[test]
fn crosscheck_suites() {
    let (code, r) = troptheta(&["crosscheck", "B", &fixture("na_g1.json"), "--samples", "100"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "riemann_agreement")["detail"]["equal"], 100);

    let (code, r) = troptheta(&["crosscheck", "A", &fixture("level2_g1.json")]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "transformation_law")["detail"]["checked"], 350);

    let (code, r) = troptheta(&["crosscheck", "C", &fixture("na_mismatch.json")]);
    assert_eq!(code, 1);
    assert!(check(&r, "precondition")["detail"]["error"].as_str().unwrap().contains("cocycle"));

    let (code, _) = troptheta(&["crosscheck", "C", &fixture("na_level2.json")]);
    assert_eq!(code, 0);

    // suite B needs non-Archimedean data
    let (code, _) = troptheta(&["crosscheck", "B", &fixture("riemann_g1.json")]);
    assert_eq!(code, 2);
}

#[test]
fn divisor_reports() {
    let out = scratch("g1.json");
    let (code, r) = troptheta(&["divisor", &fixture("riemann_g1.json"), "--out", &out]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "corner_locus")["detail"]["corner_points"], 1);
    let mesh: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(mesh["vertices"][0]["points"], serde_json::json!([["1/1"]]));

    let out = scratch("g2.svg");
    let (code, r) = troptheta(&["divisor", &fixture("riemann_g2.json"), "--out", &out, "--format", "svg"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "corner_locus")["detail"]["betti"], serde_json::json!([1, 2]));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("<?xml"));

    let (code, r) = troptheta(&["divisor", &fixture("riemann_g1.json"), "--out", &out, "--format", "ply"]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("unsupported format"));

    let (code, _) = troptheta(&["divisor", &fixture("riemann_g1.json")]);
    assert_eq!(code, 2);
}

#[test]
fn export_round_trips() {
    let out = scratch("level2.json");
    let (code, _) = troptheta(&["export", &fixture("na_level2.json"), "--out", &out]);
    assert_eq!(code, 0);
    let (code, a) = troptheta(&["eval", &out, "1/3"]);
    assert_eq!(code, 0);
    let (_, b) = troptheta(&["eval", &fixture("na_level2.json"), "1/3"]);
    assert_eq!(a["checks"], b["checks"]);
}

#[test]
fn timings_are_opt_in() {
    let (_, r) = troptheta(&["crosscheck", "A", &fixture("riemann_g2.json"), "--samples", "3"]);
    assert!(r.get("timings_ms").is_none());
    let (_, r) = troptheta(&["crosscheck", "A", &fixture("riemann_g2.json"), "--samples", "3", "--timings"]);
    assert!(r["timings_ms"]["transformation_law"].is_number());
}
