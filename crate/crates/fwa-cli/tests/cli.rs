//! End-to-end tests driving the `fwa` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../fwa/fixtures")
        .join(name)
}

fn fwa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn example1() -> String {
    fixture("example1.json").to_str().unwrap().to_string()
}

#[test]
fn accept_the_empty_string() {
    let out = fwa(&["accept", &example1(), "--input", ""]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "0.1\n");
}

#[test]
fn accept_a_word_token() {
    let out = fwa(&["accept", &example1(), "--input", "S"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "0.1\n");
}

#[test]
fn accept_on_the_extension_differs() {
    let out = fwa(&["accept", &example1(), "--extended", "--input", "S"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "0.2\n");
}

#[test]
fn accept_json_output() {
    let out = fwa(&["accept", &example1(), "--input", "S", "--json"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "{\"grade\": 0.1}\n");
}

#[test]
fn unknown_tokens_exit_2_and_name_the_token() {
    let out = fwa(&["accept", &example1(), "--input", "S XL"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("XL"));
}

#[test]
fn accept_is_byte_deterministic() {
    let a = fwa(&["accept", &example1(), "--extended", "--input", "S L M"]);
    let b = fwa(&["accept", &example1(), "--extended", "--input", "S L M"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extend_eval_reproduces_the_almost_small_row() {
    let sprime = fixture("sprime.json").to_str().unwrap().to_string();
    let out = fwa(&[
        "extend-eval",
        &example1(),
        "--state",
        "q0",
        "--word-file",
        &sprime,
        "--digits",
        "4",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "{\"q0\":1.0,\"q1\":0.3162,\"q2\":0.1}\n");
}

#[test]
fn extend_eval_on_an_own_word_shows_the_drift() {
    // the word S itself, supplied as a file: the extension fires the
    // overlapping words too, unlike the table row
    let dir = tempfile::tempdir().unwrap();
    let word_file = dir.path().join("s.json");
    std::fs::write(&word_file, "{\"S\": {\"1\": 1.0, \"2\": 0.5, \"3\": 0.1}}\n").unwrap();
    let out = fwa(&[
        "extend-eval",
        &example1(),
        "--state",
        "q0",
        "--word-file",
        word_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "{\"q0\":1.0,\"q1\":0.2,\"q2\":0.1}\n");
}

#[test]
fn extend_eval_of_the_empty_word_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let word_file = dir.path().join("empty.json");
    std::fs::write(&word_file, "{\"E\": {}}\n").unwrap();
    let out = fwa(&[
        "extend-eval",
        &example1(),
        "--state",
        "q0",
        "--word-file",
        word_file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "{}\n");
}

#[test]
fn retract_writes_the_golden_row_and_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("down.json");
    let out = fwa(&["retract", &example1(), out_path.to_str().unwrap()]);
    assert!(out.status.success());

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "facv");
    let row = doc["delta"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["from"] == "q0" && r["on"] == "3")
        .expect("row exists");
    assert_eq!(row["to"]["q0"], 0.1);
    assert_eq!(row["to"]["q1"], 0.9);
    assert_eq!(row["to"]["q2"], 0.1);

    // accepting through the retracted document equals the library path
    let via_cli = fwa(&[
        "accept",
        out_path.to_str().unwrap(),
        "--input",
        "3 1",
    ]);
    assert!(via_cli.status.success());
    let m = match fwa::io::load(fixture("example1.json")).unwrap() {
        fwa::AnyAutomaton::Facw(m) => m,
        _ => unreachable!(),
    };
    let expected = fwa::Automaton::accept(&fwa::retract(&m), &["3", "1"]).unwrap();
    assert_eq!(
        stdout_of(&via_cli).trim(),
        serde_json::to_string(&expected.value()).unwrap()
    );
}

#[test]
fn retract_requires_a_word_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let down = dir.path().join("down.json");
    assert!(fwa(&["retract", &example1(), down.to_str().unwrap()])
        .status
        .success());
    let again = dir.path().join("again.json");
    let out = fwa(&["retract", down.to_str().unwrap(), again.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("facw"));
}

#[test]
fn product_with_itself_keeps_example_values() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("product.json");
    let out = fwa(&["product", &example1(), &example1(), out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let accept = fwa(&["accept", out_path.to_str().unwrap(), "--input", "S"]);
    assert!(accept.status.success());
    assert_eq!(stdout_of(&accept), "0.1\n");
}

#[test]
fn hom_check_accepts_the_identity_and_rejects_a_collapse() {
    let dir = tempfile::tempdir().unwrap();
    let identity = dir.path().join("identity.json");
    std::fs::write(
        &identity,
        "{\"q0\": \"q0\", \"q1\": \"q1\", \"q2\": \"q2\"}\n",
    )
    .unwrap();
    let ok = fwa(&["hom-check", &example1(), &example1(), identity.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout_of(&ok).contains("homomorphism: yes"));

    let collapse = dir.path().join("collapse.json");
    std::fs::write(
        &collapse,
        "{\"q0\": \"q0\", \"q1\": \"q0\", \"q2\": \"q0\"}\n",
    )
    .unwrap();
    let bad = fwa(&["hom-check", &example1(), &example1(), collapse.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout_of(&bad).contains("homomorphism: no"));
}

#[test]
fn hom_image_under_the_identity_is_the_automaton_itself() {
    let dir = tempfile::tempdir().unwrap();
    let identity = dir.path().join("identity.json");
    std::fs::write(
        &identity,
        "{\"q0\": \"q0\", \"q1\": \"q1\", \"q2\": \"q2\"}\n",
    )
    .unwrap();
    let out_path = dir.path().join("image.json");
    let out = fwa(&[
        "hom-image",
        &example1(),
        &example1(),
        identity.to_str().unwrap(),
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        std::fs::read_to_string(fixture("example1.json")).unwrap()
    );
}

#[test]
fn independence_reports_the_witness() {
    let out = fwa(&["independence", &example1(), "--max-len", "1", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["bound"].as_f64().unwrap() >= 0.1);
    assert_eq!(report["witness"], serde_json::json!(["S"]));
    assert_eq!(report["consistent_within_horizon"], serde_json::json!(false));
}

#[test]
fn check_runs_a_suite_and_exits_zero() {
    let out = fwa(&[
        "check",
        "--suite",
        "lift-retract-roundtrip,product-language",
        "--trials",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("lift-retract-roundtrip"));
    assert!(text.contains("all checks passed"));
}

#[test]
fn check_rejects_unknown_suites() {
    let out = fwa(&["check", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("nonsense"));
}
