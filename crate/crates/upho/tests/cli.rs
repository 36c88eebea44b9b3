//! End-to-end tests of the command-line interface: exit codes, output
//! determinism, and the construct -> file -> analyze round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn upho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("upho-cli-{}-{name}", std::process::id()))
}

#[test]
fn construct_grid_reports_figure_ranks() {
    let out = upho(&["construct", "grid", "--a", "1,2", "--depth", "6"]);
    let json = stdout_json(&out);
    let sizes: Vec<usize> = json["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![1, 4, 6, 6, 6, 6]);
    assert_eq!(json["depth"], 6);
}

#[test]
fn construct_output_is_deterministic() {
    let first = upho(&["construct", "planar", "--b", "3", "--a2", "1", "--a3", "1", "--depth", "5"]);
    let second = upho(&["construct", "planar", "--b", "3", "--a2", "1", "--a3", "1", "--depth", "5"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn construct_stern_and_dot() {
    let out = upho(&["construct", "stern", "--depth", "4"]);
    let json = stdout_json(&out);
    let sizes: Vec<usize> = json["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![1, 3, 7, 15, 31]);

    let dot = upho(&["construct", "planar", "--b", "3", "--a2", "1", "--a3", "1", "--depth", "5", "--dot"]);
    assert!(dot.status.success());
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph poset {"));
    assert!(text.contains("rank=same"));
}

#[test]
fn analyze_match_and_exit_codes() {
    let ok = upho(&[
        "analyze", "--name", "grid", "--a", "1,2", "--depth", "6",
        "--rgf", "--match", "(1+x)(1+2x)/(1-x)",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let json = stdout_json(&ok);
    assert_eq!(json["pass"], true);
    assert_eq!(json["rgf"]["matched"]["matched"], true);

    let bad = upho(&[
        "analyze", "--name", "grid", "--a", "1,2", "--depth", "6",
        "--rgf", "--match", "1/(1-2x)",
    ]);
    assert_eq!(bad.status.code(), Some(1), "property failure exits 1");
    let json: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(json["pass"], false);

    let usage = upho(&["analyze", "--name", "nosuch", "--depth", "3", "--rgf"]);
    assert_eq!(usage.status.code(), Some(2), "usage error exits 2");
}

#[test]
fn analyze_davydov_without_poset() {
    let ok = upho(&["analyze", "--davydov", "(1+3x)/((1-x)(1-2x))"]);
    assert_eq!(ok.status.code(), Some(0));
    let rejected = upho(&["analyze", "--davydov", "1/(1-x+x^2)"]);
    assert_eq!(rejected.status.code(), Some(1));
}

#[test]
fn construct_then_analyze_round_trips() {
    let path = temp_path("grid.json");
    let out = upho(&[
        "construct", "grid", "--a", "1,2", "--depth", "6",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let inline = upho(&["analyze", "--name", "grid", "--a", "1,2", "--depth", "6", "--rgf", "--upho"]);
    let from_file = upho(&["analyze", "--poset", path.to_str().unwrap(), "--rgf", "--upho"]);
    let mut inline_json = stdout_json(&inline);
    let mut file_json = stdout_json(&from_file);
    // the construction label differs; everything else must be identical
    inline_json["construction"] = serde_json::Value::Null;
    file_json["construction"] = serde_json::Value::Null;
    assert_eq!(inline_json, file_json);
    std::fs::remove_file(&path).ok();
}

#[test]
fn analyze_merges_and_schur_sections() {
    let out = upho(&[
        "analyze", "--name", "planar", "--b", "3", "--a2", "1", "--a3", "1",
        "--depth", "6", "--merges",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["merges"]["recurrence_holds"], true);
    assert_eq!(json["merges"]["root_bifurcated_per_rank"], serde_json::json!([0, 0, 1, 1, 0, 0]));

    // 1/(1-3x+x^2+x^3) has non-real denominator roots, so its Ehrenborg
    // function stops being Schur positive at degree 3
    let out = upho(&[
        "analyze", "--name", "planar", "--b", "3", "--a2", "1", "--a3", "1",
        "--depth", "6", "--schur", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["schur"]["positive"], false);
    assert_eq!(json["schur"]["witness"]["degree"], 3);
    assert_eq!(json["schur"]["witness"]["partition"], serde_json::json!([1, 1, 1]));
    assert_eq!(json["schur"]["witness"]["coefficient"], "-1");

    let lines = upho(&[
        "analyze", "--name", "theorem12", "--a", "1", "--b", "2", "--depth", "7",
        "--schur", "2", "--format", "schur",
    ]);
    assert!(lines.status.success());
    let text = String::from_utf8(lines.stdout).unwrap();
    assert!(text.contains("# degree 2"));
    assert!(text.contains("· s["));
}

#[test]
fn monoid_presentation_from_file_and_cancellation() {
    let path = temp_path("stern.txt");
    std::fs::write(&path, "a b c\nac = ba\nbc = ca\n").unwrap();
    let out = upho(&[
        "analyze", "--name", "monoid", "--relations", path.to_str().unwrap(),
        "--depth", "4", "--rgf", "--cancellation",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["cancellation"]["cancellative"], true);
    assert_eq!(
        json["rgf"]["series"],
        serde_json::json!(["1", "3", "7", "15", "31"])
    );

    let failing = temp_path("noncancel.txt");
    std::fs::write(&failing, "a b\naa = ab\n").unwrap();
    let out = upho(&[
        "analyze", "--name", "monoid", "--relations", failing.to_str().unwrap(),
        "--depth", "4", "--cancellation",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["cancellation"]["cancellative"], false);
    assert_eq!(
        json["cancellation"]["counterexample"],
        serde_json::json!(["a", "a", "b"])
    );
    std::fs::remove_file(&path).ok();
    std::fs::remove_file(&failing).ok();
}

#[test]
fn separate_subsets() {
    let out = upho(&["separate", "--subsets", "∅;2;3;2,3", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["all_distinct"], true);
    assert_eq!(json["class_counts"][0][6], 64);
    assert_eq!(json["class_counts"][1][6], 63);

    let coinciding = upho(&["separate", "--subsets", "2;2", "--depth", "6"]);
    assert_eq!(coinciding.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&coinciding.stdout).unwrap();
    assert_eq!(json["first_coincidence"], serde_json::json!([0, 1]));
}

#[test]
fn budget_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_upho"))
        .args(["construct", "stern", "--depth", "8"])
        .env("UPHO_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "stderr: {err}");
}
