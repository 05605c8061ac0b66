use std::io::Write;
use std::process::{Command, Output, Stdio};

fn clipseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clipseq"))
        .args(args)
        .env_remove("CLIPSEQ_CACHE")
        .env_remove("CLIPSEQ_UNDISSECT_LIMIT")
        .env_remove("CLIPSEQ_MAX_POLYGON")
        .env_remove("CLIPSEQ_MAX_PERMUTATION")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clipseq"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn clip_square() {
    let o = clipseq(&["clip", "4; 1-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "21\n");
}

#[test]
fn dissect_with_report() {
    let o = clipseq(&["dissect", "3241"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("4; 1-3"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn build_rejects_312_with_witness() {
    let o = clipseq(&["build", "312"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("entries 3 1 2 at positions 1 2 3"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn build_then_clip_is_identity() {
    let mut avoiders = String::new();
    for m in 1..=10 {
        let o = clipseq(&["enumerate", "--kind", "avoiders", "--size", &m.to_string()]);
        assert!(o.status.success());
        avoiders.push_str(&stdout(&o));
    }
    let built = with_stdin(&["build"], &avoiders);
    assert!(built.status.success(), "{}", stderr(&built));
    let clipped = with_stdin(&["clip"], &stdout(&built));
    assert!(clipped.status.success(), "{}", stderr(&clipped));
    assert_eq!(stdout(&clipped), avoiders);
    assert_eq!(avoiders.lines().count(), 23713);
}

#[test]
fn undissect_pentagon_and_limits() {
    let o = clipseq(&["undissect", "5;"]);
    assert_eq!(stdout(&o), "4321\n");
    let o = clipseq(&["undissect", "--limit", "3", "5;"]);
    assert_eq!(o.status.code(), Some(3));
    let o = clipseq(&["undissect", "5; 1-3,1-4"]);
    assert!(o.status.success());
}

#[test]
fn undissect_cache_stays_in_its_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("tables");
    let args = [
        "--cache-dir",
        cache.to_str().unwrap(),
        "undissect",
        "6; 2-4",
    ];
    let first = clipseq(&args);
    let second = clipseq(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(stdout(&first), stdout(&second));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn parse_errors_exit_one() {
    assert_eq!(clipseq(&["clip", "4; 1-3,2-4"]).status.code(), Some(1));
    assert_eq!(clipseq(&["clip", "5;"]).status.code(), Some(1));
    assert_eq!(clipseq(&["dissect", "123"]).status.code(), Some(1));
    assert_eq!(clipseq(&["check", "2 2 3"]).status.code(), Some(1));
    assert_eq!(clipseq(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn bounds_exit_three() {
    let o = clipseq(&["enumerate", "--kind", "triangulations", "--size", "30"]);
    assert_eq!(o.status.code(), Some(3));
    let o = clipseq(&[
        "verify",
        "--suite",
        "clip",
        "--to",
        "9",
        "--max-polygon",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn enumerate_counts() {
    let count = |args: &[&str]| stdout(&clipseq(args)).trim().to_string();
    assert_eq!(
        count(&[
            "enumerate",
            "--kind",
            "triangulations",
            "--size",
            "9",
            "--count-only"
        ]),
        "429"
    );
    assert_eq!(
        count(&[
            "enumerate",
            "--kind",
            "avoiders",
            "--size",
            "5",
            "--count-only"
        ]),
        "42"
    );
    assert_eq!(
        count(&[
            "enumerate",
            "--kind",
            "decent",
            "--size",
            "4",
            "--count-only"
        ]),
        "3"
    );
    assert_eq!(
        count(&[
            "enumerate",
            "--kind",
            "dissections",
            "--size",
            "6",
            "--diagonals",
            "1",
            "--count-only"
        ]),
        "9"
    );
    assert_eq!(
        count(&[
            "--json",
            "enumerate",
            "--kind",
            "dissections",
            "--size",
            "5",
            "--count-only"
        ]),
        r#"{"count":11}"#
    );
}

#[test]
fn json_outputs_one_object_per_line() {
    let o = clipseq(&[
        "--json",
        "enumerate",
        "--kind",
        "triangulations",
        "--size",
        "6",
    ]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 14);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n_vertices"], 6);
    }
    let o = clipseq(&["--json", "build", "2314"]);
    assert_eq!(
        stdout(&o),
        "{\"n_vertices\":6,\"diagonals\":[[1,3],[1,4],[4,6]]}\n"
    );
    let o = clipseq(&["--json", "clip", r#"{"n_vertices":4,"diagonals":[[1,3]]}"#]);
    assert_eq!(stdout(&o), "{\"permutation\":[2,1]}\n");
}

#[test]
fn check_flags() {
    let o = clipseq(&["check", "--avoiding", "2413"]);
    assert!(stdout(&o).starts_with("312-avoiding: no"));
    let o = clipseq(&["check", "--pattern", "--decent", "3241"]);
    assert_eq!(stdout(&o), "decent: yes\npattern: DUD\n");
}

#[test]
fn verify_suites_pass() {
    for suite in ["clip", "tree", "dissect"] {
        let o = clipseq(&["verify", "--suite", suite, "--to", "7"]);
        assert!(o.status.success(), "{suite}: {}", stderr(&o));
        assert!(stdout(&o).lines().all(|l| l.contains(" 0 failures")));
    }
    let o = clipseq(&[
        "verify",
        "--suite",
        "angulation",
        "--j",
        "2",
        "--from",
        "3",
        "--to",
        "3",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("angulations=12"));
}

#[test]
fn render_clip_steps_has_five_panels() {
    let o = clipseq(&["render", "--view", "clip-steps", "6; 2-6,3-6,4-6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("class=\"panel\"").count(), 5);
    let o = clipseq(&["render", "--view", "tree", "--format", "dot", "2314"]);
    assert!(stdout(&o).starts_with("digraph tree"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["render", "--highlight", "1,2,3", "6; 1-3,1-4,4-6"][..],
        &["--json", "dissect", "652314"][..],
        &["enumerate", "--kind", "dissections", "--size", "7"][..],
        &["--json", "verify", "--suite", "dissect", "--to", "6"][..],
    ] {
        assert_eq!(clipseq(args).stdout, clipseq(args).stdout, "{args:?}");
    }
}
