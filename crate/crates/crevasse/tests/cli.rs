//! Binary surface: record round trips, report shapes, exit codes, and the
//! graded completion wording.

use std::io::Write as _;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], input: &str) -> (Option<i32>, String, String) {
    let bin = env!("CARGO_BIN_EXE_crevasse");
    let mut child = Command::new(bin)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("binary exits");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn dual_round_trips_a_space_through_its_algebra() {
    let space = r#"{"points": 4, "crevasses": [[[0], [1], [2], [3]]]}"#;
    let (code, bpa, _) = run(&["dual"], space);
    assert_eq!(code, Some(0));
    assert_eq!(
        bpa.trim(),
        r#"{"algebra":{"atoms":4},"generators":[[[0],[1],[2],[3]]]}"#
    );
    let (code, back, _) = run(&["dual"], &bpa);
    assert_eq!(code, Some(0));
    assert_eq!(back.trim(), r#"{"crevasses":[[[0],[1],[2],[3]]],"points":4}"#);
    // emitted records parse back to the same emission: lossless
    let (code, again, _) = run(&["dual"], &back);
    assert_eq!(code, Some(0));
    assert_eq!(again, bpa);
}

#[test]
fn verify_reports_parse_as_json_and_pass() {
    let (code, out, _) = run(
        &["verify", "--suite", "lattice", "--max-atoms", "3", "--format", "json"],
        "",
    );
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(out.trim()).expect("one JSON report");
    assert_eq!(report["suite"], "lattice");
    assert_eq!(report["passed"], Value::Bool(true));
    assert!(report["checks"].as_array().unwrap().len() == 5);
}

#[test]
fn verify_text_is_line_oriented_and_stable() {
    let args = ["verify", "--suite", "algebras", "--max-atoms", "3"];
    let (code, first, _) = run(&args, "");
    assert_eq!(code, Some(0));
    let (_, second, _) = run(&args, "");
    let strip_wall = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("wall-ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_wall(&first), strip_wall(&second));
    assert!(first.starts_with("suite algebras\n"));
    assert!(first.contains("\nresult pass\n"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, _) = run(&["verify", "--suite", "nosuch"], "");
    assert_eq!(code, Some(2));
    let (code, _, _) = run(&["verify", "--depth", "13"], "");
    assert_eq!(code, Some(2));
    let (code, _, _) = run(&["enumerate", "partitions", "--atoms", "9"], "");
    assert_eq!(code, Some(2));
    let (code, _, _) = run(&["dual"], "[1, 2, 3]");
    assert_eq!(code, Some(2));
    // a branch record is well-formed but not dualizable
    let (code, _, _) = run(&["dual"], r#"{"prefix": "1", "period": "0"}"#);
    assert_eq!(code, Some(2));
}

#[test]
fn unstable_dual_diagnostic_round_trips_in_json() {
    let split = r#"{"algebra": {"atoms": 4}, "generators": [[[0, 1], [2, 3]]]}"#;
    let (code, out, _) = run(&["dual", "--format", "json"], split);
    assert_eq!(code, Some(1));
    let diag: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(diag["error"], "unstable");
    assert_eq!(diag["replay"], "dual-requires-stable-structure");
    let cx = diag["counterexample"].to_string();
    let (code, replay_out, _) =
        run(&["verify", "--replay", "dual-requires-stable-structure", "--format", "json"], &cx);
    assert_eq!(code, Some(1));
    let verdict: Value = serde_json::from_str(replay_out.trim()).unwrap();
    assert_eq!(verdict["reproduced"], Value::Bool(true));
}

#[test]
fn replay_of_a_passing_instance_exits_zero() {
    let fine = r#"{"algebra": {"atoms": 2}, "generators": [[[0], [1]]]}"#;
    let (code, out, _) = run(&["verify", "--replay", "dual-requires-stable-structure"], fine);
    assert_eq!(code, Some(0));
    assert!(out.contains("result pass"));
}

#[test]
fn completion_verdicts_match_separation() {
    let separated = r#"{"points": 3, "crevasses": [[[0], [1], [2]]]}"#;
    let (code, out, _) = run(&["complete"], separated);
    assert_eq!(code, Some(0));
    assert!(out.contains("verdict homeomorphism"));

    let glued = r#"{"points": 3, "crevasses": [[[0, 1], [2]]]}"#;
    let (code, out, _) = run(&["complete"], glued);
    assert_eq!(code, Some(0));
    assert!(out.contains("report dense true"));
    assert!(out.contains("report embedding false"));
    assert!(out.contains("verdict dense, not embedding"));
}

#[test]
fn completing_the_sparse_tree_reports_bounded_evidence() {
    let tree = r#"{"branching": [2], "depth_bound": 8, "subspace": "eventually-zero"}"#;
    let (code, out, _) = run(&["complete"], tree);
    assert_eq!(code, Some(0));
    assert!(out.contains("report dense true"));
    assert!(out.contains("report embedding true"));
    assert!(out.contains("report homeomorphism false"));
    assert!(out.contains(r#"unrealized {"period":"1","prefix":""}"#));
    assert!(out.contains("verdict dense + embedding, homeomorphism not established"));
    // the completed object is the full subspace, as a record
    assert!(out.contains(r#"completed {"branching":[2],"depth_bound":8,"subspace":"all"}"#));

    let full = r#"{"branching": [2], "depth_bound": 8, "subspace": "all"}"#;
    let (code, out, _) = run(&["complete"], full);
    assert_eq!(code, Some(0));
    assert!(out.contains("verdict homeomorphism"));

    // probing past the record's own bound is a usage error
    let (code, _, _) = run(&["complete", "--depth", "9"], tree);
    assert_eq!(code, Some(2));
}

#[test]
fn enumerate_lists_partitions_and_spectra() {
    let (code, out, _) = run(&["enumerate", "partitions", "--atoms", "3"], "");
    assert_eq!(code, Some(0));
    assert!(out.contains("count 5"));
    assert_eq!(out.lines().filter(|l| l.starts_with("partition ")).count(), 5);

    let full = r#"{"algebra": {"atoms": 3}, "generators": [[[0], [1], [2]]]}"#;
    let (code, out, _) = run(&["enumerate", "spectra"], full);
    assert_eq!(code, Some(0));
    assert!(out.contains("count 3"));

    // spectra of an invalid structure are refused as a diagnostic
    let split = r#"{"algebra": {"atoms": 4}, "generators": [[[0, 1], [2, 3]]]}"#;
    let (code, _, _) = run(&["enumerate", "spectra"], split);
    assert_eq!(code, Some(1));
}
