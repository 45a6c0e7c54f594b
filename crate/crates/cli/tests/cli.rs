use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preresolve")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--json", p]);
    let o = run(&full);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (o.status.code().unwrap(), v)
}

#[test]
fn resolve_z4_over_isbell() {
    let (code, v) = report(&["resolve", "--sub", "isbell:2", "--object", r#"{"generators":1,"relations":[[4]]}"#]);
    assert_eq!(code, 0);
    assert!(v["verdicts"][0]["detail"].as_str().unwrap().starts_with("length 1"));
    assert_eq!(v["witnesses"]["resolution"]["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn resolve_member_has_length_zero() {
    let o = run(&["resolve", "--sub", "isbell:2", "--object", "Z/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("length 0"));
}

#[test]
fn resolve_depth_exceeded() {
    let (code, v) = report(&["resolve", "--sub", "add-ring:4", "--object", "Z/2", "--max-len", "5"]);
    assert_eq!(code, 1);
    assert!(v["verdicts"][0]["detail"].as_str().unwrap().contains("depth exceeded"));
    assert_eq!(v["witnesses"]["partial_tower"].as_array().unwrap().len(), 6);
}

#[test]
fn demos_hold() {
    let expected = [
        ("isbell", "witness Z/2 ↣ Z/4 ↠ Z/2"),
        ("periodic-counterexample", "acyclic rel add(Z/4): no"),
        ("domination", "minimal-level kernel is a member"),
        ("padding", "C• = 0"),
    ];
    for (name, text) in expected {
        let o = run(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains(text), "{name}: {}", stdout(&o));
    }
    let o = run(&["demo", "periodic-counterexample"]);
    assert!(stdout(&o).contains("acyclic absolutely: yes"));
}

#[test]
fn padding_demo_rejects_add_ring() {
    let c = r#"{"window":{"period":1},"objects":{"0":{"generators":1,"relations":[[4]]}},"differentials":{"0":[[2]]}}"#;
    let o = run(&["demo", "padding", "--sub", "add-ring:4", "--complex", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not uniformly preresolving"));
}

#[test]
fn axioms_fgab_and_broken_demo() {
    let o = run(&["check-axioms", "fgab", "--budget", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check-axioms", "isbell:2", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proved"));
    let (code, v) = report(&["check-axioms", "broken-demo", "--budget", "50"]);
    assert_eq!(code, 1);
    let r0 = &v["verdicts"][0];
    assert_eq!(r0["name"], "R0");
    assert_eq!(r0["holds"], false);
    assert!(v["witnesses"]["axioms"]["results"][0]["witness"].is_object());
}

#[test]
fn reports_replay() {
    let args = ["check-axioms", "isbell:2", "--budget", "60", "--seed", "11"];
    let (_, mut a) = report(&args);
    let (_, mut b) = report(&args);
    a["wall_time_ms"] = Value::Null;
    b["wall_time_ms"] = Value::Null;
    assert_eq!(a, b);
    let (_, mut c) = report(&["demo", "isbell", "--seed", "3"]);
    let (_, mut d) = report(&["demo", "isbell", "--seed", "3"]);
    c["wall_time_ms"] = Value::Null;
    d["wall_time_ms"] = Value::Null;
    assert_eq!(c, d);
}

#[test]
fn replace_and_acyclic() {
    let c = r#"{"window":[0,1],"objects":{"0":{"generators":1,"relations":[[4]]},"1":{"generators":1,"relations":[[4]]}},"differentials":{"0":[[2]]}}"#;
    let o = run(&["replace", "--sub", "isbell:2", "--complex", c, "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stage 1: Cover"));
    let o = run(&["acyclic", "--complex", c, "--sub", "isbell:2"]);
    assert_eq!(o.status.code(), Some(1));
    let p = r#"{"window":{"period":1},"objects":{"0":{"generators":1,"relations":[[4]]}},"differentials":{"0":[[2]]}}"#;
    let o = run(&["replace", "--sub", "isbell:2", "--complex", p, "--window=-1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn unknown_names_are_errors() {
    assert_eq!(run(&["demo", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["check-axioms", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["resolve", "--sub", "nope", "--object", "Z"]).status.code(), Some(2));
    assert_eq!(run(&["resolve", "--sub", "isbell:2", "--object", "{bad"]).status.code(), Some(2));
}
