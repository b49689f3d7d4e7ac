use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coarsekit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["fdc", "--help"])), 0);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["space", "gen", "--interval", "3"])), 2);
}

#[test]
fn free_group_ball_has_seventeen_elements() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f2.json");
    let o = run(&["space", "gen", "--group", "free2", "--radius", "2", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read_json(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 17);
    assert_eq!(v["metric"]["kind"], "word");
}

#[test]
fn other_groups_generate() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("h.json");
    let o = run(&["space", "gen", "--group", "heisenberg", "--radius", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_json(&out)["points"].as_array().unwrap().len(), 5);

    let gens = write(&dir, "gens.json", &json!({"generators": [{"matrix": [[1, 1], [0, 1]]}]}));
    let out = dir.path().join("m.json");
    let o = run(&["space", "gen", "--group", "matrix", "--file", s(&gens), "--radius", "3", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_json(&out)["points"].as_array().unwrap().len(), 7);

    let bad = write(&dir, "bad.json", &json!({"generators": [{"matrix": [[2, 0], [0, 1]]}]}));
    assert_eq!(code(&run(&["space", "gen", "--group", "matrix", "--file", s(&bad)])), 2);
    assert_eq!(code(&run(&["space", "gen", "--group", "q7"])), 2);
}

#[test]
fn node_cap_is_enforced() {
    let o = bin().args(["space", "gen", "--group", "free2", "--radius", "4"]).env("COARSEKIT_NODE_CAP", "10").output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("10"), "{}", stderr(&o));
}

#[test]
fn decompose_verify_and_detect_tampering() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&["fdc", "decompose", "--lattice", "2", "--radius", "6", "--schedule", "3,3", "--out", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["fdc", "verify", "--cert", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let dot = run(&["fdc", "dot", "--cert", s(&cert)]);
    assert_eq!(code(&dot), 0);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph"));

    // move one point into a different U sub-part next to a neighbour
    let mut v = read_json(&cert);
    let subs = v["certificate"]["parts"][0]["U"].as_array_mut().unwrap();
    assert!(subs.len() >= 2);
    let moved = subs[0].as_array_mut().unwrap().pop().unwrap();
    subs[1].as_array_mut().unwrap().push(moved);
    let bad = write(&dir, "bad.json", &v);
    let report = dir.path().join("report.json");
    let o = run(&["fdc", "verify", "--cert", s(&bad), "--json", s(&report)]);
    assert_eq!(code(&o), 1);
    let r = fs::read_to_string(&report).unwrap();
    assert!(r.contains("not_disjoint") || r.contains("cover_mismatch"), "{r}");
    assert!(r.contains("\"fail\""));
}

#[test]
fn malformed_json_reports_location() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    fs::write(&p, "{\n  \"space\": {\n    \"points\": [1, 2,\n").unwrap();
    let o = run(&["fdc", "verify", "--cert", s(&p)]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("line") && e.contains("column"), "{e}");
    let o = run(&["rips", "build", "--space", s(&dir.path().join("missing.json")), "--scale", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn weakened_certificate_verifies() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&run(&["fdc", "decompose", "--lattice", "1", "--radius", "12", "--schedule", "6", "--out", s(&cert)])), 0);
    let targets = write(&dir, "targets.json", &json!({"targets": [["(-12)", "(-9)", "(-6)", "(0)", "(3)"], ["(10)", "(11)", "(12)"]]}));
    let weak = dir.path().join("weak.json");
    let o = run(&["fdc", "weaken", "--cert", s(&cert), "--t", "1", "--targets", s(&targets), "--out", s(&weak)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_json(&weak)["certificate"]["r"], 4.0);
    assert_eq!(code(&run(&["fdc", "verify", "--cert", s(&weak)])), 0);

    let o = run(&["fdc", "weaken", "--cert", s(&cert), "--t", "3", "--targets", s(&targets)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn rips_commands() {
    let dir = TempDir::new().unwrap();
    let space = dir.path().join("x.json");
    assert_eq!(code(&run(&["space", "gen", "--lattice", "2", "--radius", "3", "--out", s(&space)])), 0);
    let k = dir.path().join("k.json");
    let o = run(&["rips", "build", "--space", s(&space), "--scale", "1", "--out", s(&k)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(read_json(&k).is_object());

    let dot = run(&["rips", "dot", "--space", s(&space), "--scale", "1"]);
    assert_eq!(code(&dot), 0);
    let text = String::from_utf8_lossy(&dot.stdout);
    assert_eq!(text.matches(" -- ").count(), 36);

    let report = dir.path().join("r.json");
    let o = run(&["rips", "check-metric", "--space", s(&space), "--scale", "2", "--samples", "100", "--json", s(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(read_json(&report)["checks"][0]["status"], "pass");
    let o = run(&["rips", "check-metric", "--space", s(&space), "--scale", "2", "--samples", "100", "--inflate", "10"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["rips", "build", "--space", s(&space), "--scale", "-1"])), 2);
}

fn interval_cover(u: std::ops::RangeInclusive<i32>, v: std::ops::RangeInclusive<i32>) -> Value {
    let ids = |r: std::ops::RangeInclusive<i32>| r.map(|i| i.to_string()).collect::<Vec<_>>();
    json!({
        "space": {"points": ids(0..=9), "metric": {"kind": "l1_lattice", "dim": 1, "coords": (0..=9).map(|i| vec![i]).collect::<Vec<_>>()}},
        "levels": [[{"Z": ids(0..=9), "U": ids(u), "V": ids(v)}]],
    })
}

#[test]
fn sequence_cover_and_families() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", &interval_cover(0..=4, 4..=9));
    let o = run(&["seq", "cover-check", "--cover", s(&good), "--scales", "1"]);
    assert_eq!(code(&o), 0, "{}{}", String::from_utf8_lossy(&o.stdout), stderr(&o));

    let gap = write(&dir, "gap.json", &interval_cover(0..=3, 6..=9));
    let report = dir.path().join("r.json");
    let o = run(&["seq", "cover-check", "--cover", s(&gap), "--scales", "1", "--json", s(&report)]);
    assert_eq!(code(&o), 1);
    assert_eq!(read_json(&report)["checks"][0]["status"], "fail");

    let fam = dir.path().join("w.json");
    let o = run(&["seq", "wfam", "--cover", s(&good), "--t", "1.5", "--out", s(&fam)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = read_json(&fam);
    let members = v["families"][0]["members"].as_array().unwrap();
    assert_eq!(members.len(), 1);
    let pts: Vec<&str> = members[0]["points"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(pts, ["3", "4", "5"]);
}

#[test]
fn algebra_check_runs() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("a.json");
    let o = run(&["algebra", "check", "--suite", "split", "--seed", "3", "--cases", "20", "--json", s(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = read_json(&report);
    assert_eq!(v["checks"][0]["name"], "algebra_split");
    assert_eq!(v["seed"], 3);
    assert_eq!(code(&run(&["algebra", "check", "--suite", "nope"])), 2);
}
