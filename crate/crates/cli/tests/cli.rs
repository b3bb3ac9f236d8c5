use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.theory", env!("CARGO_MANIFEST_DIR"))
}

fn dialectic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dialectic")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = dialectic(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> String {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dialectic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn check_reports_validity_at_points() {
    let text = stdout(&["check", &fixture("tweety"), "--at", "p"]);
    assert!(text.contains("consistency: ok"));
    assert!(text.contains("valid at p: {d2}"));
    assert!(text.contains("eliminated d1 (Default)"));
    let text = stdout(&["check", &fixture("tweety")]);
    assert!(text.contains("valid at cell 11: {d2}"));
}

#[test]
fn check_fails_on_inconsistent_attachment() {
    let dir = std::env::temp_dir().join(format!("dialectic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.theory");
    std::fs::write(&path, "atoms: p q\nd1: p ~> q\nd2: p ~> ~q\n").unwrap();
    let out = dialectic(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("jointly inconsistent"));
}

#[test]
fn missing_file_is_an_error() {
    let out = dialectic(&["check", "/nonexistent.theory"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading"));
}

#[test]
fn hierarchy_formats() {
    let table = stdout(&["hierarchy", &fixture("fixture_e")]);
    assert_eq!(table.lines().filter(|l| l.contains('\t')).count(), 6);
    assert_eq!(table.lines().filter(|l| l.contains(" < ")).count(), 7);
    let dot = stdout(&["hierarchy", &fixture("fixture_e"), "--format", "dot"]);
    assert_eq!(dot.matches("->").count(), 7);
    let order = stdout(&["hierarchy", &fixture("tweety"), "--format", "order", "--elements"]);
    assert!(order.contains("packet o(10) {100}"));
    assert!(order.lines().any(|l| l.starts_with("element ")));
    let mut sorted: Vec<&str> = order.lines().filter(|l| l.starts_with("order ")).collect();
    let original = sorted.clone();
    sorted.sort();
    assert_eq!(sorted, original);
}

#[test]
fn queries() {
    let t = fixture("tweety");
    assert!(stdout(&["query", &t, "holds", "p", "~f"]).starts_with("holds"));
    assert!(stdout(&["query", &t, "holds", "p", "f"]).starts_with("does not hold"));
    assert_eq!(stdout(&["query", &t, "minimal", "b"]), "{101}\n");
    let c = stdout(&["query", &t, "classify", "b", "~f"]);
    assert!(c.contains("cells 10\n") && c.contains("packets o(10)\n"));
    let c = stdout(&["query", &t, "--variant", "cardinality", "--radical", "classify", "b"]);
    assert!(c.contains("packets mu(10)"));
    let out = dialectic(&["query", &t, "--variant", "bogus", "minimal", "b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn session_loop_and_replay() {
    let open = json!({"verb": "open", "config": {
        "participants": [
            {"id": "arbiter", "name": "Arbiter", "role": "arbiter"},
            {"id": "ann", "name": "Ann", "role": "participant"},
            {"id": "bob", "name": "Bob", "role": "participant"}
        ],
        "mode": "extensional",
        "domain": ["x", "a", "b", "c"]
    }});
    let mut lines = vec![open.to_string()];
    for (author, label, items) in [
        ("ann", "A", json!(["x", "a"])),
        ("ann", "B", json!(["x", "b"])),
        ("ann", "C", json!(["x", "c"])),
        ("bob", "Y", json!(["a", "b", "c"])),
    ] {
        lines.push(
            json!({"verb": "move", "move": {"author": author, "label": label,
                   "kind": "assert-fact", "content": {"elements": items}}})
            .to_string(),
        );
    }
    lines.push(json!({"verb": "transcript"}).to_string());
    let out = with_stdin(&["session"], &(lines.join("\n") + "\n"));
    let responses: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(responses.len(), 6);
    assert!(responses.iter().all(|r| r["ok"] == true), "{out}");
    assert_eq!(responses[4]["delta"]["phase"], "retraction-vote");

    let text = responses[5]["transcript"].as_str().unwrap();
    let path = std::env::temp_dir().join(format!("dialectic-replay-{}.ndjson", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let summary = stdout(&["replay", path.to_str().unwrap()]);
    assert!(summary.contains("phase retraction-vote"));
    assert_eq!(summary.matches("culprits ").count(), 3);
    assert!(summary.contains("culprits {A, B, Y}"));
    let state: Value = serde_json::from_str(&stdout(&["replay", path.to_str().unwrap(), "--json"])).unwrap();
    assert_eq!(state["moves"].as_array().unwrap().len(), 4);
}

#[test]
fn seeded_session_from_a_theory_file() {
    let out = with_stdin(
        &["session", "--seed", &fixture("tweety"), "--participant", "ann"],
        "{\"verb\":\"move\",\"move\":{\"author\":\"ann\",\"kind\":\"assert-fact\",\"content\":{\"formula\":\"b\"}}}\n{\"verb\":\"state\"}\n",
    );
    let responses: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(responses[0]["ok"], true, "{out}");
    assert_eq!(responses[1]["state"]["classification"]["packets"], json!(["mu(10)"]));
    let bad = dialectic(&["session", "--seed", &fixture("tweety")]);
    assert_eq!(bad.status.code(), Some(2));
}
