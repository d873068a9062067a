//! End-to-end runs of the koszulkit binary: JSON contracts, table output,
//! exit codes, and determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

use koszulkit::fpfield::PrimeField;
use koszulkit::ncpoly::parse_word;
use koszulkit::quadalg::{exterior, symmetric, PresentationJson, QuadraticPresentation};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_koszulkit"))
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

fn exterior2_file(dir: &tempfile::TempDir) -> PathBuf {
    let j = exterior(PrimeField::new(3).unwrap(), 2).unwrap().to_json();
    write_file(dir, "ext2.json", &serde_json::to_string(&j).unwrap())
}

fn demushkin_file(dir: &tempfile::TempDir) -> PathBuf {
    let spec = json!({"p": 3, "group": {"kind": "demushkin", "d": 2, "q": 3}});
    write_file(dir, "dem.json", &spec.to_string())
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).unwrap()
}

#[test]
fn hilbert_prints_the_dimension_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let file = exterior2_file(&dir);
    let out = bin().arg("hilbert").arg(&file).output().unwrap();
    assert_eq!(stdout_json(&out), json!([1, 2, 1, 0, 0, 0, 0]));
    let out = bin().arg("hilbert").arg(&file).args(["--cap", "2"]).output().unwrap();
    assert_eq!(stdout_json(&out), json!([1, 2, 1]));
}

#[test]
fn dual_output_reparses_to_an_equal_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let file = exterior2_file(&dir);
    let out = bin().arg("dual").arg(&file).output().unwrap();
    let parsed: PresentationJson = serde_json::from_str(&stdout_of(&out)).unwrap();
    let reparsed = QuadraticPresentation::from_json(&parsed).unwrap();
    let expect = symmetric(PrimeField::new(3).unwrap(), 2).unwrap();
    assert!(reparsed.relations().equals(expect.relations()).unwrap());
}

#[test]
fn koszul_reports_a_clean_diagonal_for_exterior_algebras() {
    let dir = tempfile::tempdir().unwrap();
    let file = exterior2_file(&dir);
    let out = bin().arg("koszul").arg(&file).output().unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["koszul_up_to"], json!(4));
    assert_eq!(v["witness"], Value::Null);
    assert_eq!(v["hilbert_defect"], json!([0, 0, 0, 0, 0]));
}

#[test]
fn the_resource_limit_variable_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let file = exterior2_file(&dir);
    let out = bin()
        .arg("koszul")
        .arg(&file)
        .env("KOSZULKIT_RESOURCE_LIMIT", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("resource-limit"));
    let out = bin()
        .arg("koszul")
        .arg(&file)
        .env("KOSZULKIT_RESOURCE_LIMIT", "plenty")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("invalid-input"));
}

#[test]
fn group_presentation_relations_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let file = demushkin_file(&dir);
    let out = bin().arg("group").arg(&file).arg("presentation").output().unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["p"], json!(3));
    assert_eq!(v["generators"], json!(["x1", "x2"]));
    assert_eq!(v["theta"], json!([1, -2]));
    for r in v["relations"].as_array().unwrap() {
        parse_word(r.as_str().unwrap()).unwrap();
    }
}

#[test]
fn verify_duality_emits_the_two_field_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = demushkin_file(&dir);
    let out = bin().arg("group").arg(&file).arg("verify-duality").output().unwrap();
    assert_eq!(
        stdout_json(&out),
        json!({"relation_subspaces_equal": true, "dims_equal_up_to": 6})
    );
    // a cap below 2 checks nothing and is refused
    let out = bin()
        .arg("group")
        .arg(&file)
        .arg("verify-duality")
        .args(["--cap", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("invalid-input"));
}

#[test]
fn group_pipelines_agree_with_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let file = demushkin_file(&dir);
    let out = bin().arg("group").arg(&file).arg("invariants").output().unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["d"], json!(2));
    assert_eq!(v["r"], json!(1));
    assert_eq!(v["t1"], json!(1));
    assert_eq!(v["f1"], json!(0));
    let out = bin().arg("group").arg(&file).arg("cohomology").output().unwrap();
    let parsed: PresentationJson = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed.p, 3);
    assert_eq!(parsed.generators, ["x1*", "x2*"]);
    QuadraticPresentation::from_json(&parsed).unwrap();
    let out = bin().arg("group").arg(&file).arg("gr").output().unwrap();
    let parsed: PresentationJson = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed.generators, ["X1", "X2"]);
}

#[test]
fn zassenhaus_layers_of_a_theta_abelian_group() {
    let dir = tempfile::tempdir().unwrap();
    let spec = json!({"p": 2, "group": {"kind": "theta-abelian", "d": 3, "q": 4}});
    let file = write_file(&dir, "ta.json", &spec.to_string());
    let out = bin()
        .arg("group")
        .arg(&file)
        .arg("zassenhaus")
        .args(["--cap", "8"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out), json!([3, 3, 0, 3, 0, 0, 0, 3]));
}

#[test]
fn obstruction_tables_cover_the_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let file = demushkin_file(&dir);
    let out = bin().arg("obstruction").arg(&file).output().unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["p"], json!(3));
    assert_eq!(v["precision"], json!(8));
    assert_eq!(v["rows"], json!(["x1*", "x2*"]));
    assert_eq!(v["all_zero"], json!(true));
    assert_eq!(v["entries"][0][0]["value"], json!("0"));
    let out = bin()
        .arg("obstruction")
        .arg(&file)
        .args(["--precision", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("invalid-input"));
    let out = bin().arg("obstruction").arg(&file).args(["--format", "table"]).output().unwrap();
    assert!(stdout_of(&out).starts_with("no obstruction found at precision 3^8"));
}

#[test]
fn magnus_expands_a_commutator() {
    let out = bin()
        .arg("magnus")
        .arg("comm(x1,x2)")
        .args(["--d", "2", "--cap", "3"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(
        v["expansion"],
        json!("1 + X1X2 - X2X1 - X1X2X1 - X1X2^2 + X2X1^2 + X2X1X2")
    );
    assert_eq!(v["initial_form"]["degree"], json!(2));
    assert_eq!(v["initial_form"]["coeffs"], json!([0, 1, 2, 0]));
    // a word that is trivial up to the cap has no initial form
    let out = bin()
        .arg("magnus")
        .arg("pow(x1, 0)")
        .args(["--d", "1", "--cap", "3"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["expansion"], json!("1"));
    assert_eq!(v["initial_form"], Value::Null);
}

#[test]
fn parse_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "bad.json", "{\"p\": 3,");
    let out = bin().arg("hilbert").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("json"));
    let out = bin().arg("hilbert").arg(dir.path().join("missing.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("io"));
    let out = bin()
        .arg("magnus")
        .arg("x0")
        .args(["--d", "2", "--cap", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("parse"));
    // unknown flags are usage errors, also 2
    let out = bin().arg("hilbert").arg("--nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_failures_exit_one_with_the_error_name() {
    let dir = tempfile::tempdir().unwrap();
    let spec = json!({"p": 2, "group": {"kind": "demushkin", "d": 3, "q": 2}});
    let file = write_file(&dir, "dem22.json", &spec.to_string());
    let out = bin().arg("group").arg(&file).arg("cohomology").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("model-out-of-scope"));
    let out = bin().arg("obstruction").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("model-out-of-scope"));
}

#[test]
fn identical_runs_emit_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let file = demushkin_file(&dir);
    let run = || {
        let out = bin().arg("group").arg(&file).arg("verify-duality").output().unwrap();
        out.stdout
    };
    assert_eq!(run(), run());
    let table = || {
        let out = bin().arg("obstruction").arg(&file).output().unwrap();
        out.stdout
    };
    assert_eq!(table(), table());
}

#[test]
fn table_format_renders_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let algebra = exterior2_file(&dir);
    let group = demushkin_file(&dir);
    // layer dims have closed forms for theta-abelian groups, not one-relator ones
    let ta = json!({"p": 2, "group": {"kind": "theta-abelian", "d": 3, "q": 4}});
    let layered = write_file(&dir, "ta.json", &ta.to_string());
    for args in [
        vec!["hilbert", algebra.to_str().unwrap()],
        vec!["dual", algebra.to_str().unwrap()],
        vec!["koszul", algebra.to_str().unwrap()],
        vec!["group", group.to_str().unwrap(), "presentation"],
        vec!["group", group.to_str().unwrap(), "cohomology"],
        vec!["group", group.to_str().unwrap(), "invariants"],
        vec!["group", layered.to_str().unwrap(), "zassenhaus"],
        vec!["group", group.to_str().unwrap(), "verify-duality"],
        vec!["obstruction", group.to_str().unwrap()],
        vec!["magnus", "comm(x1,x2)", "--d", "2"],
    ] {
        let out = bin().args(&args).args(["--format", "table"]).output().unwrap();
        let text = stdout_of(&out);
        assert!(!text.trim().is_empty(), "empty table for {args:?}");
        assert!(!text.contains('{'), "table looks like JSON for {args:?}");
    }
}

#[test]
fn a_closed_output_pipe_is_not_an_error() {
    // `koszulkit ... | head` closes stdout early; the run must still exit 0
    // with no panic note on stderr, whether or not any bytes got through
    let dir = tempfile::tempdir().unwrap();
    let algebra = exterior2_file(&dir);
    let mut child = bin()
        .args(["koszul", algebra.to_str().unwrap()])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let out = child.wait_with_output().unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(out.status.success(), "exit: {:?}, stderr: {stderr}", out.status);
    assert!(stderr.is_empty(), "stderr not empty: {stderr}");
}
