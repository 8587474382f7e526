//! End-to-end tests of the installed binary: every verb is exercised
//! through real files and real exit codes, including the fault-injection
//! paths of the 0/1/2 contract and the round-trip stability of the JSON
//! artifacts.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde::Serialize;
use tempfile::TempDir;

use spirkit::samples::{three_party_program, three_party_structure};
use spirkit::AccessStructure;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spirkit"))
}

fn write_artifact<T: Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn stdout_line(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap().trim_end().to_string()
}

fn stderr_line(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap().trim_end().to_string()
}

fn json_value(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bound_delta_prints_the_exact_line() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());

    let output = bin().args(["bound", "delta", "--access"]).arg(&access).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_line(&output), "delta=1 bound=1/3");

    let as_json = bin()
        .args(["bound", "delta", "--format", "json", "--access"])
        .arg(&access)
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&as_json.stdout).unwrap();
    assert_eq!(report["delta"], 1);
    assert_eq!(report["bound"], "1/3");
}

#[test]
fn verify_accepts_the_sample_program() {
    let dir = TempDir::new().unwrap();
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());

    let output = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&program)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_line(&output), "valid rate=1/4");

    let as_json = bin()
        .args(["mmsp", "verify", "--format", "json", "--in"])
        .arg(&program)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    let verdict: serde_json::Value = serde_json::from_slice(&as_json.stdout).unwrap();
    assert_eq!(verdict["accepts_all"], true);
    assert_eq!(verdict["rejects_all"], true);
    assert_eq!(verdict["rate"], "1/4");
}

#[test]
fn verify_fails_against_the_wrong_structure_with_the_failing_set() {
    let dir = TempDir::new().unwrap();
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let threshold =
        write_artifact(dir.path(), "thr.json", &AccessStructure::threshold(3, 2, 1).unwrap());

    let output = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&program)
        .arg("--access")
        .arg(&threshold)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let line = stdout_line(&output);
    assert!(line.starts_with("invalid"), "line: {line}");
    assert!(line.contains("{1,2}"), "line: {line}");
}

#[test]
fn artifacts_round_trip_through_every_conversion() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let spir = dir.path().join("spir.json");
    let nss = dir.path().join("nss.json");
    let back = dir.path().join("back.json");
    let projected = dir.path().join("projected.json");

    let split = bin()
        .args(["convert", "mmsp-to-spir", "--f", "2", "--in"])
        .arg(&program)
        .arg("--out")
        .arg(&spir)
        .output()
        .unwrap();
    assert_eq!(split.status.code(), Some(0));
    assert_eq!(json_value(&spir)["kind"], "spir");

    let audit = bin()
        .args(["audit", "spir", "--in"])
        .arg(&spir)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(audit.status.code(), Some(0));
    assert_eq!(
        stdout_line(&audit),
        "secure=true alpha=0/1 beta_bits=0 gamma_bits=0 rate=1/4 randomness_rate=2/1"
    );

    let collapse = bin()
        .args(["convert", "spir-to-nss", "--in"])
        .arg(&spir)
        .arg("--out")
        .arg(&nss)
        .output()
        .unwrap();
    assert_eq!(collapse.status.code(), Some(0));
    assert_eq!(json_value(&nss)["kind"], "nss");

    let nss_audit = bin()
        .args(["audit", "nss", "--in"])
        .arg(&nss)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(nss_audit.status.code(), Some(0));
    assert_eq!(
        stdout_line(&nss_audit),
        "secure=true alpha=0/1 beta_bits=0 rate=1/4 randomness_rate=2/1"
    );

    let reinterpret = bin()
        .args(["convert", "nss-to-mmsp", "--in"])
        .arg(&nss)
        .arg("--out")
        .arg(&back)
        .output()
        .unwrap();
    assert_eq!(reinterpret.status.code(), Some(0));
    assert_eq!(json_value(&back), json_value(&program), "round trip must be lossless");

    let reproject = bin()
        .args(["convert", "project", "--in"])
        .arg(&spir)
        .arg("--out")
        .arg(&projected)
        .output()
        .unwrap();
    assert_eq!(reproject.status.code(), Some(0));
    assert_eq!(json_value(&projected), json_value(&spir), "projection must be a fixed point");
}

#[test]
fn vandermonde_artifact_verifies_against_its_threshold() {
    let dir = TempDir::new().unwrap();
    let threshold =
        write_artifact(dir.path(), "thr.json", &AccessStructure::threshold(3, 2, 1).unwrap());
    let vdm = dir.path().join("vdm.json");

    let build = bin()
        .args(["mmsp", "vandermonde", "--q", "5", "--n", "3", "--r", "2", "--t", "1", "--out"])
        .arg(&vdm)
        .output()
        .unwrap();
    assert_eq!(build.status.code(), Some(0));

    let verify = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&vdm)
        .arg("--access")
        .arg(&threshold)
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_line(&verify), "valid rate=1/3");
}

#[test]
fn search_emits_a_program_that_verifies() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    let found = dir.path().join("found.json");

    let search = bin()
        .args(["mmsp", "search", "--q", "3", "--y", "2", "--max-z", "4", "--access"])
        .arg(&access)
        .arg("--out")
        .arg(&found)
        .output()
        .unwrap();
    assert_eq!(search.status.code(), Some(0));

    let verify = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&found)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn search_exhaustion_is_a_negative_verdict() {
    let dir = TempDir::new().unwrap();
    // No program over one column can both accept {2,3} and reject both
    // maximal forbidden sets, so the bounded search must come up empty.
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());

    let search = bin()
        .args(["mmsp", "search", "--q", "2", "--y", "0", "--max-z", "3", "--access"])
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(search.status.code(), Some(1));
    assert!(stderr_line(&search).contains("no program"));
}

#[test]
fn simulate_is_deterministic_and_reports_outcomes() {
    let dir = TempDir::new().unwrap();
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let spir = dir.path().join("spir.json");
    bin()
        .args(["convert", "mmsp-to-spir", "--f", "2", "--in"])
        .arg(&program)
        .arg("--out")
        .arg(&spir)
        .output()
        .unwrap();

    let run = |seed: &str| {
        bin()
            .args(["simulate", "--k", "2", "--respond", "2,3", "--collude", "1,2"])
            .args(["--seed", seed, "--format", "json", "--in"])
            .arg(&spir)
            .output()
            .unwrap()
    };
    let first = run("7");
    let second = run("7");
    let other = run("8");
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "same seed must give identical traces");
    assert_ne!(first.stdout, other.stdout, "different seed must move the trace");
    let trace: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(trace["outcome"]["kind"], "reconstructed");
    assert_eq!(trace["k"], 2);

    let blocked = bin()
        .args(["simulate", "--respond", "{1,2}", "--in"])
        .arg(&spir)
        .output()
        .unwrap();
    assert_eq!(blocked.status.code(), Some(0));
    assert_eq!(stdout_line(&blocked), "outcome=unreachable");
}

#[test]
fn check_verbs_pass_on_shipped_artifacts() {
    let dir = TempDir::new().unwrap();
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    let vdm = dir.path().join("vdm.json");
    bin()
        .args(["mmsp", "vandermonde", "--q", "5", "--n", "4", "--r", "3", "--t", "1", "--out"])
        .arg(&vdm)
        .output()
        .unwrap();

    let t1_default = bin().args(["check", "theorem1", "--in"]).arg(&program).output().unwrap();
    assert_eq!(t1_default.status.code(), Some(0));
    assert!(stdout_line(&t1_default).starts_with("agree=true"));

    let t1_vdm = bin().args(["check", "theorem1", "--in"]).arg(&vdm).output().unwrap();
    assert_eq!(t1_vdm.status.code(), Some(0));
    assert_eq!(stdout_line(&t1_vdm), "agree=true cond_a=true cond_b=true");

    let l2 = bin().args(["check", "lemma2", "--in"]).arg(&program).output().unwrap();
    assert_eq!(l2.status.code(), Some(0));
    assert_eq!(stdout_line(&l2), "agree=true");

    let l3 = bin()
        .args(["check", "lemma3", "--in"])
        .arg(&program)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(l3.status.code(), Some(0));
    assert_eq!(stdout_line(&l3), "secure=true");

    let p2 = bin().args(["check", "prop2", "--in"]).arg(&program).output().unwrap();
    assert_eq!(p2.status.code(), Some(0));
    assert_eq!(stdout_line(&p2), "match=true");
}

#[test]
fn share_secrecy_check_reports_the_witness() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    // Third row (1,0,0) hands party 3 the bare secret, so {3} must surface.
    let leaky = dir.path().join("leaky.json");
    std::fs::write(
        &leaky,
        r#"{"q":3,"x":1,"y":2,"n":3,"tau":[1,2,3,3],"g":[[0,1,2],[1,1,1],[1,0,0],[1,1,0]]}"#,
    )
    .unwrap();

    let output = bin()
        .args(["check", "lemma3", "--in"])
        .arg(&leaky)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout_line(&output), "secure=false witness={3}");

    let as_json = bin()
        .args(["check", "lemma3", "--format", "json", "--in"])
        .arg(&leaky)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&as_json.stdout).unwrap();
    assert_eq!(report["secure"], false);
    assert_eq!(report["witness"], serde_json::json!([3]));
}

#[test]
fn corrupt_json_exits_two_with_the_bad_json_code() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, "{\"q\":3,").unwrap();

    let output = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&corrupt)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_line(&output).starts_with("error[bad_json]:"));
}

#[test]
fn schema_violations_exit_two_with_the_bad_json_code() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    // Well-formed JSON, wrong artifact: an entry outside the field.
    let out_of_range = dir.path().join("bad.json");
    std::fs::write(
        &out_of_range,
        r#"{"q":3,"x":1,"y":2,"n":3,"tau":[1,2,3,3],"g":[[0,1,7],[1,1,1],[0,1,1],[1,1,0]]}"#,
    )
    .unwrap();

    let output = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(&out_of_range)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_line(&output).starts_with("error[bad_json]:"));

    // A retrieval verb fed a sharing artifact must refuse by kind.
    let nss = dir.path().join("nss.json");
    std::fs::write(
        &nss,
        r#"{"kind":"nss","q":3,"x":1,"y":2,"n":3,"tau":[1,2,3,3],"g":[[0,1,2],[1,1,1],[0,1,1],[1,1,0]]}"#,
    )
    .unwrap();
    let wrong_kind = bin()
        .args(["audit", "spir", "--in"])
        .arg(&nss)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(wrong_kind.status.code(), Some(2));
    assert!(stderr_line(&wrong_kind).starts_with("error[bad_json]:"));
}

#[test]
fn missing_file_exits_two_with_the_io_code() {
    let dir = TempDir::new().unwrap();
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());

    let output = bin()
        .args(["mmsp", "verify", "--in"])
        .arg(dir.path().join("absent.json"))
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_line(&output).starts_with("error[io]:"));
}

#[test]
fn budget_flag_and_environment_cap_enumeration() {
    let dir = TempDir::new().unwrap();
    let program = write_artifact(dir.path(), "prog.json", &three_party_program());
    let access = write_artifact(dir.path(), "access.json", &three_party_structure());
    let spir = dir.path().join("spir.json");
    bin()
        .args(["convert", "mmsp-to-spir", "--f", "2", "--in"])
        .arg(&program)
        .arg("--out")
        .arg(&spir)
        .output()
        .unwrap();

    let by_flag = bin()
        .args(["audit", "spir", "--budget", "10", "--in"])
        .arg(&spir)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(by_flag.status.code(), Some(2));
    assert!(stderr_line(&by_flag).starts_with("error[budget_exceeded]:"));

    let by_env = bin()
        .env("SPIRKIT_BUDGET", "10")
        .args(["audit", "spir", "--in"])
        .arg(&spir)
        .arg("--access")
        .arg(&access)
        .output()
        .unwrap();
    assert_eq!(by_env.status.code(), Some(2));
    assert!(stderr_line(&by_env).starts_with("error[budget_exceeded]:"));
}

#[test]
fn unknown_subcommand_exits_two() {
    let output = bin().arg("nonsense").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn dash_streams_stdin_and_stdout() {
    let program_text = serde_json::to_string(&three_party_program()).unwrap();

    let mut child = bin()
        .args(["check", "lemma2", "--in", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(program_text.as_bytes()).unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_line(&output), "agree=true");

    let to_stdout = bin()
        .args(["mmsp", "vandermonde", "--q", "5", "--n", "3", "--r", "2", "--t", "1"])
        .output()
        .unwrap();
    assert_eq!(to_stdout.status.code(), Some(0));
    let artifact: serde_json::Value = serde_json::from_slice(&to_stdout.stdout).unwrap();
    assert_eq!(artifact["q"], 5);
    assert_eq!(artifact["n"], 3);
}
