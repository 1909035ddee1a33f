//! End-to-end runs of the `c1abs` binary: exit codes, table layout and the
//! report files.

use std::path::Path;
use std::process::{Command, Output};

const BASIC: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/basic.json");

fn c1abs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c1abs"))
        .args(args)
        .env_remove("C1ABS_MAX_MODULE")
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> (i32, String, String) {
    (
        o.status.code().expect("exit code"),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = text(&c1abs(&["validate", BASIC]));
    assert_eq!(code, 0);
    assert!(out.starts_with("ok:"));

    let z8 = write(
        dir.path(),
        "z8.json",
        r#"{"schema_version": 1, "rings": [{"name": "Z8", "kind": "zmod", "n": 8}]}"#,
    );
    assert_eq!(text(&c1abs(&["validate", &z8])).0, 0);

    // Z4 with 2·2 = 1: (2·2)·3 = 3 but 2·(2·3) = 1.
    let assoc = write(
        dir.path(),
        "assoc.json",
        r#"{"schema_version": 1, "rings": [{"name": "R", "kind": "tables",
            "add": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],
            "mul": [[0,0,0,0],[0,1,2,3],[0,2,1,2],[0,3,2,1]], "zero": 0, "one": 1}]}"#,
    );
    let (code, _, err) = text(&c1abs(&["validate", &assoc]));
    assert_eq!(code, 1);
    assert!(
        err.contains("associativity of multiplication fails at (2,2,3)"),
        "{err}"
    );

    let bad = write(
        dir.path(),
        "bad.json",
        "{\"schema_version\": 1,\n \"rings\": [\n {\"name\": \"Z4\" \"kind\": \"zmod\"}]}",
    );
    let (code, _, err) = text(&c1abs(&["validate", &bad]));
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn export_round_trips_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    assert_eq!(
        text(&c1abs(&["validate", BASIC, "--export", first.to_str().unwrap()])).0,
        0
    );
    let (code, out, _) = text(&c1abs(&[
        "validate",
        first.to_str().unwrap(),
        "--export",
        second.to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{out}");
    assert_eq!(
        std::fs::read_to_string(first).unwrap(),
        std::fs::read_to_string(second).unwrap()
    );
}

#[test]
fn classify_table() {
    let (code, out, _) = text(&c1abs(&["classify", BASIC, "M4", "zero4"]));
    assert_eq!(code, 0);
    let header: Vec<&str> = out.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(
        header,
        [
            "submodule",
            "popcount",
            "prime",
            "classical_prime",
            "semiprime",
            "1abs_prime",
            "classical_1abs_prime",
            "classical_2abs",
            "witness"
        ]
    );
    let row: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(
        &row[..8],
        ["zero4", "1", "false", "false", "false", "true", "true", "true"]
    );
    assert!(out.contains("prime (2;2)") && out.contains("classical_prime (2,2;1)"));

    // Header plus the three proper submodules 0, <4>, <2>.
    let (code, out, _) = text(&c1abs(&["classify", BASIC, "M8"]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);

    let (code, _, err) = text(&c1abs(&["classify", BASIC, "M8", "whole8"]));
    assert_eq!(code, 2);
    assert!(err.contains("proper submodule required"));
    assert_eq!(text(&c1abs(&["classify", BASIC, "nope"])).0, 2);

    let (code, out, _) = text(&c1abs(&["classify", BASIC, "M4", "--set", "odd"]));
    assert_eq!(code, 0);
    assert!(out.contains("<2>"), "{out}");
}

#[test]
fn caps_come_from_flags_and_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_c1abs"))
        .args(["classify", BASIC, "M8"])
        .env("C1ABS_MAX_MODULE", "4")
        .output()
        .unwrap();
    let (code, _, err) = text(&out);
    assert_eq!(code, 1);
    assert!(err.contains("exceeds cap 4"), "{err}");
    let (code, _, err) = text(&c1abs(&["--force", "classify", BASIC, "M4"]));
    assert_eq!(code, 0);
    assert!(err.contains("WARNING"));
}

#[test]
fn amalgamate_transfer_table() {
    let (code, out, _) = text(&c1abs(&["amalgamate", BASIC, "M4", "two", "--classify"]));
    assert_eq!(code, 0);
    assert!(out.contains("|A⋈I| = 8") && out.contains("|M⋈I| = 8"));
    assert!(!out.contains("DIFFERS"));
    let (code, out, _) = text(&c1abs(&["amalgamate", BASIC, "M4", "zero", "--classify"]));
    assert_eq!(code, 0);
    assert!(out.contains("|A⋈I| = 4") && out.contains("|M⋈I| = 4"));
    let (code, _, err) = text(&c1abs(&["amalgamate", BASIC, "M4", "two", "--max-amalgam-module", "4"]));
    assert_eq!(code, 1);
    assert!(err.contains("exceeds cap 4"), "{err}");
}

#[test]
fn verify_usage_errors() {
    assert_eq!(
        text(&c1abs(&["verify", "--default-corpus", "--theorems", "bogus"])).0,
        2
    );
    assert_eq!(text(&c1abs(&["verify"])).0, 2);
}

#[test]
fn verify_default_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let timings = dir.path().join("timings.json");
    let o = c1abs(&[
        "verify",
        "--default-corpus",
        "--theorems",
        "all",
        "--out",
        report.to_str().unwrap(),
        "--timings",
        timings.to_str().unwrap(),
    ]);
    let (code, out, _) = text(&o);
    // Two printed statements are false as worded; every failure comes from them.
    assert_eq!(code, 1, "{out}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["summary"]["failures"], 8);
    let failing: Vec<&str> = v["theorems"]
        .as_object()
        .unwrap()
        .iter()
        .filter(|(_, t)| t["failures"].as_u64().unwrap() > 0)
        .map(|(id, _)| id.as_str())
        .collect();
    assert_eq!(failing, ["mult_triple", "tcargen"]);
    assert_eq!(v["theorems"]["tcargen"]["failures"], 5);
    assert_eq!(v["theorems"]["mult_triple"]["failures"], 3);
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&timings).unwrap()).unwrap();
    assert!(t["wall_time_seconds"]["p1"].is_number());
    assert!(!std::fs::read_to_string(&report).unwrap().contains("wall_time"));

    let (code, _, _) = text(&c1abs(&["verify", "--default-corpus", "--theorems", "lemfin,lemfin3"]));
    assert_eq!(code, 0);
}
