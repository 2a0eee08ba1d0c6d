//! End-to-end tests of the `escalator` binary: text output, JSON shape and
//! determinism, exit codes, and argument handling.

use std::process::Command;

use serde_json::Value;

fn escalator(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_escalator"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn reduce_prints_the_reduced_form() {
    let (code, stdout, _) = escalator(&["reduce", "[3,0,2]"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "reduced: [2,0,3]\ndet: 6\nalready reduced: no\n");
    let (code, stdout, _) = escalator(&["reduce", "[2,1,4]", "--strict"]);
    assert_eq!(code, 0, "reduce has no negative verdict");
    assert!(stdout.contains("already reduced: yes"));
}

#[test]
fn represents_exit_codes_follow_the_verdict() {
    let (code, stdout, _) = escalator(&["represents", "<1,1>", "2", "--strict"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("represents: yes"));
    let (code, stdout, _) = escalator(&["represents", "<1,1>", "3", "--strict"]);
    assert_eq!(
        code, 1,
        "absent target is a negative verdict under --strict"
    );
    assert!(stdout.contains("represents: no"));
    let (code, _, _) = escalator(&["represents", "<1,1>", "3"]);
    assert_eq!(code, 0, "without --strict the verdict still exits 0");
}

#[test]
fn truant_scans_integers_or_binary_forms() {
    let (code, stdout, _) = escalator(&["truant", "<1,1>"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "truant: 3\n");
    let (code, stdout, _) = escalator(&["truant", "<1,1>", "--binary", "--strict"]);
    assert_eq!(code, 1, "a found truant is a negative verdict");
    assert_eq!(stdout, "truant: [1,0,2]\n");
    let (code, stdout, _) = escalator(&["truant", "<1,1,1,1,2>", "--strict"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("truant: none"));
}

#[test]
fn escalate_lists_extensions_and_rejects_non_truants() {
    let (code, stdout, _) = escalator(&["escalate", "<1>", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "escalations: 2\n<1,2>\n<1,1>\n");
    let (code, _, stderr) = escalator(&["escalate", "<1>", "1"]);
    assert_eq!(code, 2, "a represented target is not a truant");
    assert!(stderr.contains("error"));
}

#[test]
fn tree_reports_truncation_under_strict() {
    let (code, stdout, _) = escalator(&["tree", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("nodes: 4"));
    assert!(stdout.contains("truncated: 2"));
    assert!(stdout.contains("truants: 1, 2, 3, 5"));
    let (code, _, _) = escalator(&["tree", "--depth", "2", "--strict"]);
    assert_eq!(code, 1, "truncated branches are a negative verdict");
}

#[test]
fn witness_builds_and_verifies() {
    let (code, stdout, _) = escalator(&["witness", "", "[1,0,1]", "--strict"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("witness: <1>"));
    assert!(stdout.contains("recipe: diagonal-unit"));
    assert!(stdout.contains("pass: yes"));
    let (code, stdout, _) = escalator(&["verify-witness", "<1,1>", "", "[1,0,1]", "--strict"]);
    assert_eq!(code, 1, "a witness containing its target fails");
    assert!(stdout.contains("truancy: no"));
    assert!(stdout.contains("pass: no"));
    let (code, stdout, _) =
        escalator(&["verify-witness", "<1,1>", "[1,0,1]", "[2,0,3]", "--strict"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("recipe: external"));
    assert!(stdout.contains("pass: yes"));
}

#[test]
fn verify_with_and_without_the_criterion() {
    let (code, stdout, _) = escalator(&["verify", "<1>++[2,1,2]"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("rank: 3"));
    assert!(stdout.contains("det: 3"));
    assert!(stdout.contains("minimum: 1"));
    let (code, stdout, _) = escalator(&["verify", "<1,1,1,1>", "--s2", "--strict"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("member [2,1,4]: absent"));
    assert!(stdout.contains("2-universal: no"));
}

#[test]
fn search_reports_exhaustion() {
    let (code, stdout, _) = escalator(&[
        "search",
        "[1,0,1]",
        "[1,0,1]",
        "--rank-cap",
        "2",
        "--entry-cap",
        "3",
        "--strict",
    ]);
    assert_eq!(code, 1, "an exhausted search is a negative verdict");
    assert!(stdout.contains("witness: none"));
    assert!(stdout.contains("enumerated:"));
}

#[test]
fn json_documents_are_deterministic() {
    let args = ["--json", "tree", "--depth", "2"];
    let (code, first, _) = escalator(&args);
    assert_eq!(code, 0);
    let (_, second, _) = escalator(&args);
    assert_eq!(first, second, "reruns must be byte-identical");
    let doc: Value = serde_json::from_str(&first).expect("valid JSON");
    assert_eq!(doc["command"], "tree");
    assert_eq!(doc["result"]["nodes"], 4);
    assert_eq!(doc["result"]["truncated"], 2);
    assert_eq!(doc["caps"]["depth_cap"], 2);
    assert!(doc["evidence"]["tree"]["children"].is_array());
}

#[test]
fn json_embeddings_are_coordinate_arrays() {
    let (code, stdout, _) = escalator(&["--json", "represents", "<1,1,2>", "[2,1,3]"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(doc["result"]["represents"], true);
    let embedding = doc["result"]["embedding"].as_array().expect("two vectors");
    assert_eq!(embedding.len(), 2);
    assert!(embedding[0].as_array().unwrap().len() == 3);
}

#[test]
fn tset_accepts_files_and_inline_lists() {
    let path = std::env::temp_dir().join(format!("escalator-tset-{}.txt", std::process::id()));
    std::fs::write(&path, "# members\n[1,0,1]\n\n  [3,0,3]\n").expect("tempfile");
    let file_arg = format!("@{}", path.display());
    let (code, from_file, _) = escalator(&["--json", "witness", &file_arg, "[2,0,3]"]);
    assert_eq!(code, 0);
    let (_, inline, _) = escalator(&["--json", "witness", "[1,0,1];[3,0,3]", "[2,0,3]"]);
    std::fs::remove_file(&path).ok();
    let a: Value = serde_json::from_str(&from_file).unwrap();
    let b: Value = serde_json::from_str(&inline).unwrap();
    assert_eq!(a["result"], b["result"], "file and inline sets agree");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let (code, _, stderr) = escalator(&["represents", "(nope)", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error"));
    let (code, _, _) = escalator(&["represents", "<1,1,2>", "<1,1,2>"]);
    assert_eq!(code, 2, "rank-3 targets are rejected");
    let (code, _, _) = escalator(&["tree", "--mode", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = escalator(&["witness", "@/nonexistent/members.txt", "[1,0,1]"]);
    assert_eq!(code, 2);
    let (code, _, _) = escalator(&["demo"]);
    assert_eq!(code, 2, "demo requires exactly one kind");
    let (code, _, _) = escalator(&["demo", "--uniqueness", "--fifteen"]);
    assert_eq!(code, 2);
}
