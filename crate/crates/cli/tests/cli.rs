//! End-to-end tests of the `imstit` binary: exit codes and report
//! shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imstit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("imstit-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

const SIGMA: &str = r#"{"agents": ["a"], "moments": ["m0"], "valuation": {"p": []}}"#;

#[test]
fn eval_negated_atom_on_sigma_is_true() {
    let model = write_temp("sigma1.json", SIGMA);
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "~p",
        "--point",
        "m0:0",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("h0 = [m0]"), "history table missing: {text}");
    assert!(text.trim_end().ends_with("true"));
}

#[test]
fn eval_imagination_on_sigma_is_false() {
    let model = write_temp("sigma2.json", SIGMA);
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "[i a]p",
        "--point",
        "m0:0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).trim_end().ends_with("false"));
}

#[test]
fn eval_missing_history_index_is_an_error() {
    let model = write_temp("sigma3.json", SIGMA);
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "p",
        "--point",
        "m0:7",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn eval_json_mirrors_text() {
    let model = write_temp("sigma4.json", SIGMA);
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "P ~p",
        "--point",
        "m0:0",
        "--extension",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], true);
    assert_eq!(v["desugared"], "~S ~~p");
    assert_eq!(v["extension"][0], "m0/h0");
}

#[test]
fn validate_sigma_ok() {
    let model = write_temp("sigma5.json", SIGMA);
    let out = run(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("h0 = [m0]"));
    assert!(text.contains("OK"));
}

#[test]
fn validate_independence_violation_names_selector() {
    let model = write_temp(
        "indep.json",
        r#"{"agents": ["a", "b"], "moments": ["m0", "m1", "m2"],
            "covers": [["m0", "m1"], ["m0", "m2"]],
            "choice": {"m0": {"a": [[0], [1]], "b": [[0], [1]]}}}"#,
    );
    let out = run(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("independence"), "{text}");
    assert!(text.contains("selector"), "{text}");
}

#[test]
fn validate_cyclic_covers() {
    let model = write_temp(
        "cyclic.json",
        r#"{"agents": ["a"], "moments": ["m0", "m1"],
            "covers": [["m0", "m1"], ["m1", "m0"]]}"#,
    );
    let out = run(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not a partial order"));
}

#[test]
fn validate_garbage_is_an_error() {
    let model = write_temp("garbage.json", "{ not json");
    let out = run(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

fn repo_proof(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../proofs")
        .join(name)
}

#[test]
fn prove_bundled_converse_a5() {
    let out = run(&["prove", repo_proof("converse_a5.proof").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("Accepted:"));
    assert!(text.contains("premise-free theorem"));
}

#[test]
fn prove_mutated_justification_rejected_at_line_1() {
    let original = std::fs::read_to_string(repo_proof("converse_a5.proof")).unwrap();
    let mutated = original.replace("; A2T", "; A1T");
    assert_ne!(original, mutated);
    let path = write_temp("mutated.proof", &mutated);
    let out = run(&["prove", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("Rejected at line 1"), "{text}");
}

#[test]
fn prove_dangling_reference() {
    let path = write_temp(
        "dangling.proof",
        "agents: a\n1. p -> p ; A0\n2. p ; MP 1 9\n",
    );
    let out = run(&["prove", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("DanglingReference"));
}

#[test]
fn prove_unreadable_file_is_an_error() {
    let out = run(&["prove", "/nonexistent/nope.proof"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_finds_and_emits_a_round_tripping_countermodel() {
    let out_path = std::env::temp_dir().join(format!(
        "imstit-test-{}-counter.json",
        std::process::id()
    ));
    let out = run(&[
        "search",
        "--formula",
        "[i a]p -> S [i a]p",
        "--out",
        out_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["found"], true);
    let point = v["point"].as_str().unwrap();
    let (moment, history) = point.split_once("/h").unwrap();

    // Round trip: load the written file and evaluate the negated formula
    // at the recorded point.
    let eval = run(&[
        "eval",
        "--model",
        out_path.to_str().unwrap(),
        "--formula",
        "~([i a]p -> S [i a]p)",
        "--point",
        &format!("{moment}:{history}"),
    ]);
    assert_eq!(code(&eval), 0, "{eval:?}");
    assert!(stdout(&eval).trim_end().ends_with("true"));
}

#[test]
fn search_valid_formula_reports_not_found() {
    let out = run(&["search", "--formula", "S p -> p"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("no countermodel within bounds"), "{text}");
    assert!(text.contains("models"), "{text}");
}

#[test]
fn search_malformed_formula_is_an_error() {
    let out = run(&["search", "--formula", "I a]p"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fuzz_small_run_passes() {
    let out = run(&["fuzz", "--count", "25", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all axiom and rule instances valid"));
}

#[test]
fn fuzz_zero_count_warns_and_passes() {
    let out = run(&["fuzz", "--count", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn fuzz_json_shape() {
    let out = run(&["fuzz", "--count", "5", "--seed", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["models"], 5);
}

#[test]
fn unsafe_bounds_gate() {
    let out = run(&["search", "--formula", "S p -> p", "--max-moments", "9"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--unsafe-bounds"));
}

#[test]
fn determinism_same_inputs_same_output() {
    let a = run(&["search", "--formula", "p -> S p", "--format", "json"]);
    let b = run(&["search", "--formula", "p -> S p", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(code(&a), code(&b));
}
