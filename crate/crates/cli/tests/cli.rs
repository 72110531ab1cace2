//! End-to-end runs of the binary on problem files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_petri-deform"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PETRI_DEFORM_THREADS").output().unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn hermitian_file(dir: &TempDir, order: &str) -> PathBuf {
    let path = dir.path().join(format!("hermitian{order}.json"));
    let out = run(&["hermitian", "--p", "5", "--order", order, "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn affine(dir: &TempDir) -> PathBuf {
    write(dir, "affine.json", &json!({
        "schema": 1,
        "ring": {"kind": "prime-field", "p": 5},
        "group": {"generators": [[[2, 0], [0, 1]], [[1, 1], [0, 1]]]},
    }))
}

#[test]
fn hermitian_tangent_numbers() {
    let dir = TempDir::new().unwrap();
    let file = hermitian_file(&dir, "0");
    let r = report(&["tangent", "--input", s(&file)]);
    assert_eq!(r["command"], "tangent");
    assert_eq!(r["schema_version"], 1);
    let res = &r["result"];
    assert_eq!(res["psi"]["kernel_dim"], 1);
    assert_eq!(res["psi"]["image_dim"], 99);
    assert_eq!(res["tangent_dim"], 27);
    assert_eq!(res["assertions"]["tangent_is_3g_minus_3"], "ok");
    assert!(res["delta_g"]["cocycles"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn hermitian_invariance_and_lift() {
    let dir = TempDir::new().unwrap();
    let special = hermitian_file(&dir, "0");
    let family = hermitian_file(&dir, "1");
    assert_eq!(report(&["invariance", "--input", s(&special)])["result"]["all_invariant"], true);
    let r = report(&["invariance", "--input", s(&family)]);
    assert_eq!(r["result"]["all_invariant"], false);
    assert_eq!(r["result"]["level"], "first-order");
    let r = report(&["lift", "--input", s(&family), "--depth", "2"]);
    assert_eq!(r["result"]["verdict"], "DoesNotLift");
    assert_eq!(r["result"]["character_test"]["offset"], -1);
    assert_eq!(r["result"]["deformation"]["rank_test"][0]["verdict"], "NotInvariant");
}

#[test]
fn reports_are_deterministic_and_hash_the_input() {
    let dir = TempDir::new().unwrap();
    let file = affine(&dir);
    let a = run(&["cohomology", "--input", s(&file)]);
    let b = bin().args(["cohomology", "--input", s(&file)]).env("PETRI_DEFORM_THREADS", "1").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    let hash = r["input_sha256"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let other = write(&dir, "affine2.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 5},
        "group": {"generators": [[[1, 1], [0, 1]], [[2, 0], [0, 1]]]},
    }));
    let r2 = report(&["cohomology", "--input", s(&other)]);
    assert_ne!(r2["input_sha256"], r["input_sha256"]);
    assert_eq!(r2["result"]["h1_dim"], r["result"]["h1_dim"]);
}

#[test]
fn cohomology_examples() {
    let dir = TempDir::new().unwrap();
    let c3 = write(&dir, "c3.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 3},
        "group": {"generators": [[[0, 0, 1], [1, 0, 0], [0, 1, 0]]]},
        "module": {"kind": "trivial", "dim": 1},
    }));
    assert_eq!(report(&["cohomology", "--input", s(&c3)])["result"]["h1_dim"], 1);
    assert_eq!(report(&["cohomology", "--degree", "2", "--input", s(&c3)])["result"]["h2_dim"], 1);
    let trivial = write(&dir, "trivial.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 3}, "group": {"generators": [[[1]]]},
    }));
    let r = report(&["cohomology", "--input", s(&trivial)]);
    assert_eq!((r["result"]["z1_dim"].clone(), r["result"]["h1_dim"].clone()), (json!(0), json!(0)));
    let r = report(&["cohomology", "--input", s(&affine(&dir))]);
    assert_eq!(r["result"]["group"]["order"], 20);
    assert_eq!(r["result"]["b1_dim"], 3);
}

#[test]
fn lift_examples() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 5},
        "group": {"generators": [[[2, 0], [0, 1]]]},
    }));
    let r = report(&["lift", "--input", s(&c4)]);
    assert_eq!(r["result"]["verdict"], "Lifted");
    assert_eq!(r["result"]["chain"].as_array().unwrap().len(), 3);
    let trivial_rep = write(&dir, "trivial_rep.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 5},
        "group": {"generators": [[[2, 0], [0, 1]]]},
        "rep": {"images": {"0": [[1, 0], [0, 1]]}},
    }));
    assert_eq!(report(&["lift", "--input", s(&trivial_rep)])["result"]["verdict"], "Lifted");
    let r = report(&["lift", "--input", s(&affine(&dir)), "--chain", "integers", "--depth", "2"]);
    assert_eq!(r["result"]["verdict"], "ObstructedAtDepth");
    assert_eq!(r["result"]["search"]["certificate"]["cocycle"].as_array().unwrap().len(), 400);
}

#[test]
fn identity_group_is_trivially_invariant() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "conic.json", &json!({
        "schema": 1, "ring": {"kind": "prime-field", "p": 5}, "g": 3,
        "generators": [[[0, 0, 1], [0, -2, 0], [1, 0, 0]]],
        "group": {"generators": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]},
    }));
    let r = report(&["invariance", "--input", s(&f)]);
    assert_eq!(r["result"]["all_invariant"], true);
    assert_eq!(r["result"]["group"]["order"], 1);
    let t = report(&["tangent", "--input", s(&f)]);
    assert_eq!(t["result"]["assertions"]["canonical_numbers"], "violated");
    assert!(t["result"].get("delta_g").is_none());
}

#[test]
fn text_format_and_output_file() {
    let dir = TempDir::new().unwrap();
    let file = affine(&dir);
    let out = dir.path().join("report.txt");
    let o = run(&["cohomology", "--input", s(&file), "--format", "text", "--output", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("command: cohomology"));
    assert!(text.contains("h1_dim: "));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["tangent", "--input", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["tangent"]).status.code(), Some(2));
    assert_eq!(run(&["tangent", "--input", "/nonexistent/problem.json"]).status.code(), Some(1));
    let file = affine(&dir);
    assert_eq!(run(&["cohomology", "--input", s(&file), "--bound-group", "5"]).status.code(), Some(3));
    assert_eq!(run(&["tangent", "--input", s(&file)]).status.code(), Some(2));
    let threads = bin().args(["cohomology", "--input", s(&file)]).env("PETRI_DEFORM_THREADS", "0").output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
    assert_eq!(run(&["hermitian", "--p", "4"]).status.code(), Some(2));
}
