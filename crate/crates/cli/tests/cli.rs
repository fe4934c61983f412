use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn conreach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conreach")).args(args).env_remove("CONREACH_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_ex1_reachable_by_iteration() {
    let f = fixture("ex1.json");
    let out = conreach(&["analyze", path(&f), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["case"]["tag"], "Case1Weak");
    assert_eq!(v["verdict"]["status"], "Reachable");
    assert_eq!(v["verdict"]["route"], "DirectIteration");
    assert_eq!(v["conditions"]["d"]["certificate"]["lambda"], "1");
    assert_eq!(v["conditions"]["c"]["holds"], false);
}

#[test]
fn text_and_json_carry_the_same_verdict() {
    let f = fixture("ex4.json");
    let text = conreach(&["analyze", path(&f)]);
    let js = json(&conreach(&["analyze", path(&f), "--format", "json"]));
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("EX4: NotReachable (Case1Strong)"), "{text}");
    let status = js["verdict"]["status"].as_str().unwrap();
    assert!(text.contains(&format!("status: {status}")));
    for c in js["certificates"].as_array().unwrap() {
        assert!(text.contains(&format!("lambda: {}", c["lambda"].as_str().unwrap())));
    }
}

#[test]
fn reach_set_ex1_four_steps() {
    let f = fixture("ex1.json");
    let out = conreach(&["reach-set", path(&f), "--steps", "4", "--map", "F", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["steps"], 4);
    let last = &v["sets"][3]["vrep"]["vertices"];
    let want: Value = serde_json::from_str(r#"[["-2","-2"],["-2","2"],["2","-2"],["2","2"]]"#).unwrap();
    assert_eq!(last, &want);
}

#[test]
fn reach_set_stops_when_stable() {
    let f = fixture("ex1.json");
    let v = json(&conreach(&["reach-set", path(&f), "--format", "json"]));
    assert_eq!(v["stable_at"], 4);
    assert_eq!(v["sets"].as_array().unwrap().len(), 4);
}

#[test]
fn check_conditions_ex5_all_hold() {
    let f = fixture("ex5.json");
    let v = json(&conreach(&["check-conditions", path(&f), "--format", "json"]));
    for k in ["a", "b", "c", "d"] {
        assert_eq!(v[k]["holds"], true, "{k}");
    }
}

#[test]
fn ex3_is_inconclusive() {
    let f = fixture("ex3.json");
    let out = conreach(&["analyze", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("contraction"));
}

#[test]
fn ex6_feasible_set_never_stabilizes() {
    let f = fixture("ex6.json");
    let out = Command::new(env!("CARGO_BIN_EXE_conreach"))
        .args(["feasible-set", path(&f), "--format", "json"])
        .env("CONREACH_CAP", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["steps"], 6);
    assert_eq!(v["map"], "Raw");
    let r = json(&conreach(&["reach-set", path(&f), "--steps", "3", "--format", "json"]));
    for s in r["sets"].as_array().unwrap() {
        assert_eq!(s["vrep"]["vertices"], serde_json::json!([["0"]]));
        assert_eq!(s["vrep"]["rays"], serde_json::json!([["1"]]));
    }
}

#[test]
fn cap_flag_overrides_env() {
    let f = fixture("ex3.json");
    let out = Command::new(env!("CARGO_BIN_EXE_conreach"))
        .args(["analyze", path(&f), "--format", "json", "--cap", "7"])
        .env("CONREACH_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(json(&out)["meta"]["cap"], 7);
    let out = Command::new(env!("CARGO_BIN_EXE_conreach"))
        .args(["analyze", path(&f), "--format", "json"])
        .env("CONREACH_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(json(&out)["meta"]["cap"], 4);
}

#[test]
fn json_output_is_bit_stable() {
    let f = fixture("ex5.json");
    let a = conreach(&["analyze", path(&f), "--format", "json"]).stdout;
    let b = conreach(&["analyze", path(&f), "--format", "json"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn hrep_output_reads_back_as_a_constraint_set() {
    let f = fixture("ex1.json");
    let v = json(&conreach(&["reach-set", path(&f), "--steps", "2", "--format", "json"]));
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    file["constraint"] = v["sets"][1]["hrep"].clone();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cube.json");
    std::fs::write(&p, serde_json::to_string(&file).unwrap()).unwrap();
    // R_2 is the unit square, the original constraint set
    let a = json(&conreach(&["analyze", path(&p), "--format", "json"]));
    let b = json(&conreach(&["analyze", path(&f), "--format", "json"]));
    assert_eq!(a["verdict"], b["verdict"]);
}

#[test]
fn invalid_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"sigma": {"A": [["1"]], "B": [["x"]], "C": [["0"]], "D": [["1"]]}, "constraint": {"dim": 1, "ineq": {"G": [["1"]], "h": ["1"]}}}"#).unwrap();
    let out = conreach(&["analyze", path(&p)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma.B"));
    assert_eq!(conreach(&["analyze", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(conreach(&["frobnicate"]).status.code(), Some(1));
    let f = fixture("ex1.json");
    assert_eq!(conreach(&["reach-set", path(&f), "--map", "G"]).status.code(), Some(1));
    assert_eq!(conreach(&["analyze", path(&f), "--tol", "-1"]).status.code(), Some(1));
}

#[test]
fn oracle_compare_exit_codes() {
    assert_eq!(conreach(&["oracle-compare", path(&fixture("ex5.json"))]).status.code(), Some(0));
    assert_eq!(conreach(&["oracle-compare", path(&fixture("ex2.json"))]).status.code(), Some(1));
}
