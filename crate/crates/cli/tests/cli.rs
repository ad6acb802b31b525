//! Black-box tests of the command-line surface: round-tripping an index
//! through disk, determinism of repeated invocations, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdawg-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn build_then_query_round_trips_through_disk() {
    let dir = tempdir().unwrap();
    let idx = dir.path().join("t.idx");
    let dot = dir.path().join("t.dot");
    let out = run(&[
        "build",
        "--text",
        "ababcababd",
        "--out",
        idx.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "build failed: {out:?}");
    assert!(stdout(&out).contains("n=10 e=9 nodes=4"));
    assert!(dot.exists());

    let q = run(&["query", "--index", idx.to_str().unwrap(), "--pattern", "ab", "--locate"]);
    assert!(q.status.success());
    let text = stdout(&q);
    assert!(text.contains("count: 4"), "unexpected: {text}");
    assert!(text.contains("positions: [1, 3, 6, 8]"), "unexpected: {text}");

    let absent = run(&["query", "--index", idx.to_str().unwrap(), "--pattern", "abcd"]);
    assert!(stdout(&absent).contains("count: 0"));
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let dir = tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");

    let invocations: Vec<Vec<String>> = vec![
        vec!["stats", "--text", "ababcababd", "--format", "json"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec![
            "classify",
            "--text",
            "cabcabcdabcadbcabcdabcabdcabcabcabdabcab",
            "--op",
            "del",
            "--pos",
            "13",
        ]
        .into_iter()
        .map(String::from)
        .collect(),
        vec!["verify", "--alphabet", "ab", "--max-len", "4"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec!["family", "--name", "fibonacci", "--k", "12", "--stats"]
            .into_iter()
            .map(String::from)
            .collect(),
    ];
    for args in &invocations {
        let first = bin().args(args).output().unwrap();
        let second = bin().args(args).output().unwrap();
        assert!(first.status.success(), "failed: {args:?}");
        assert_eq!(first.stdout, second.stdout, "non-deterministic stdout for {args:?}");
    }

    for (csv, _) in [(&csv_a, 0), (&csv_b, 1)] {
        let out = run(&[
            "scan",
            "--alphabet",
            "ab",
            "--max-len",
            "5",
            "--report",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap(),
        "scan CSV differs between runs"
    );
}

#[test]
fn classify_reproduces_the_worked_example() {
    let out = run(&[
        "classify",
        "--text",
        "cabcabcdabcadbcabcdabcabdcabcabcabdabcab",
        "--op",
        "del",
        "--pos",
        "13",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let class_of = |x: &str| {
        doc["classes"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["x"] == x)
            .map(|c| c["class"].as_str().unwrap().to_string())
    };
    assert_eq!(class_of("dabcab").as_deref(), Some("Qgt"));
    assert_eq!(class_of("bcabc").as_deref(), Some("Qle"));
    assert_eq!(class_of("abcabc").as_deref(), Some("N1"));
    assert_eq!(class_of("abcabcab").as_deref(), Some("NnotV"));
    assert_eq!(class_of("cabcabcdabcab").as_deref(), Some("Nv"));
    assert!(doc["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_exits_zero_and_stats_formats_agree() {
    let out = run(&["verify", "--alphabet", "ab", "--max-len", "5"]);
    assert!(out.status.success(), "verify reported violations: {out:?}");
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["lemma_violations"].as_array().unwrap().len(), 0);
    assert_eq!(doc["bound_violations"], 0);

    let text = stdout(&run(&["stats", "--text", "ababcababd"]));
    assert!(text.contains("e = 9"), "unexpected: {text}");
    let csv = stdout(&run(&["stats", "--text", "ababcababd", "--format", "csv"]));
    assert!(csv.contains("10,9,4,4"), "unexpected: {csv}");
}

#[test]
fn errors_produce_nonzero_exit() {
    let missing = run(&["query", "--index", "/nonexistent.idx", "--pattern", "a"]);
    assert!(!missing.status.success());

    let bad_pos = run(&["classify", "--text", "abab", "--op", "del", "--pos", "9"]);
    assert!(!bad_pos.status.success());

    let missing_char = run(&["classify", "--text", "abab", "--op", "ins", "--pos", "2"]);
    assert!(!missing_char.status.success());

    let dir = tempdir().unwrap();
    let junk = dir.path().join("junk.idx");
    std::fs::write(&junk, b"not an index").unwrap();
    let malformed = run(&["query", "--index", junk.to_str().unwrap(), "--pattern", "a"]);
    assert!(!malformed.status.success());
}

#[test]
fn raw_byte_input_matches_inline_text() {
    let dir = tempdir().unwrap();
    let file = dir.path().join("input.bin");
    std::fs::write(&file, b"ababcababd").unwrap();
    let via_file = stdout(&run(&["stats", "--input", file.to_str().unwrap(), "--format", "json"]));
    let via_text = stdout(&run(&["stats", "--text", "ababcababd", "--format", "json"]));
    assert_eq!(via_file, via_text);
    assert!(Path::new(&file).exists());
}
