use std::fs;
use std::process::{Command, Output};

fn qhiggs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhiggs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn suites_lists_all_builtins_sorted() {
    let o = qhiggs(&["suites"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 15);
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.iter().any(|n| n == "qhiggs-proposition"));
}

#[test]
fn verify_exact_passes() {
    let o = qhiggs(&["verify", "--suite", "builtin:qhiggs-proposition", "--cutoff", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("result: pass"));
}

#[test]
fn verify_sample_passes() {
    let o = qhiggs(&[
        "verify",
        "--suite",
        "builtin:howe-commutation",
        "--cutoff",
        "4",
        "--mode",
        "sample",
        "--seed",
        "7",
        "--quiet",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn missing_suite_file_is_a_usage_error() {
    let o = qhiggs(&["verify", "--suite", "missing.qsuite"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("missing.qsuite"));
}

#[test]
fn unknown_builtin_and_bad_flags_exit_3() {
    assert_eq!(code(&qhiggs(&["verify", "--suite", "builtin:nope"])), 3);
    assert_eq!(code(&qhiggs(&["verify", "--suite", "builtin:qosc", "--mode", "fast"])), 3);
    assert_eq!(code(&qhiggs(&["verify", "--suite", "builtin:qosc", "--samples", "0"])), 3);
    assert_eq!(code(&qhiggs(&["frobnicate"])), 3);
}

#[test]
fn failing_file_suite_exits_1_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.qsuite");
    fs::write(&path, "modes 4\nassert l-mplus: [L, Mplus] == 3 Mplus\n").unwrap();
    let report = dir.path().join("out.json");
    let o = qhiggs(&[
        "verify",
        "--suite",
        path.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("witness"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["suite"], "broken");
    assert_eq!(json["relations"][0]["outcome"], "fail");
    assert!(json["relations"][0]["witness"]["state"].is_array());
}

#[test]
fn low_fixed_samples_are_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("few.qsuite");
    fs::write(&path, "modes 1\nassert c: [A1m, A1p] == E(a=(4), c=0) @mode=sample @samples=1\n").unwrap();
    let o = qhiggs(&["verify", "--suite", path.to_str().unwrap(), "--cutoff", "6"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
}

#[test]
fn parse_error_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qsuite");
    fs::write(&path, "modes 1\nassert r: [A1m, == 0\n").unwrap();
    let o = qhiggs(&["verify", "--suite", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn reports_are_byte_identical_for_equal_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = qhiggs(&[
            "verify",
            "--suite",
            "builtin:su11-metaplectic",
            "--cutoff",
            "6",
            "--mode",
            "sample",
            "--seed",
            "5",
            "--quiet",
            "--report",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        fs::read(p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn eval_applies_to_a_state() {
    let o = qhiggs(&[
        "eval", "--expr", "[A1m, A1p]", "--modes", "1", "--cutoff", "4", "--state", "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "t^8 |2>");
}

#[test]
fn eval_rejects_malformed_input() {
    let o = qhiggs(&["eval", "--expr", "[A1m, ", "--modes", "1", "--cutoff", "4"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("column"), "{}", stderr(&o));
    let o = qhiggs(&["eval", "--expr", "A1m", "--modes", "1", "--cutoff", "4", "--state", "9"]);
    assert_eq!(code(&o), 3);
    let o = qhiggs(&["eval", "--expr", "A7m", "--modes", "1", "--cutoff", "4"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn show_prints_columns_and_rejects_unknown_names() {
    let o = qhiggs(&["show", "--op", "A1p", "--modes", "1", "--cutoff", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("|1>"));
    let o = qhiggs(&["show", "--op", "Bogus", "--modes", "1", "--cutoff", "2"]);
    assert_eq!(code(&o), 3);
}
