//! End-to-end runs of the binary against the bundled fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qphase"))
}

fn fixture(rel: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(rel);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &fixture("models/c1.json")]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).contains("valid"));
    assert!(stdout(&ok).contains("projective"));

    let broken = run(&["validate", &fixture("models/broken_symmetry.json")]);
    assert_eq!(code(&broken), 1);
    let text = stdout(&broken);
    assert!(text.contains("symmetry broken at (ep,eq)"), "{text}");

    let truncated = run(&["validate", &fixture("models/truncated.json")]);
    assert_eq!(code(&truncated), 2);

    let missing = run(&["validate", "/no/such/file.json"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn validate_recipe_models() {
    for rel in ["models/b1_recipe.json", "models/classical_pq.json"] {
        let out = run(&["validate", &fixture(rel)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert!(!stderr(&out).contains("warning"), "{}", stderr(&out));
    }
}

#[test]
fn ray_recipes_warn_when_not_closed_under_complement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lone_ray.json");
    std::fs::write(
        &path,
        r#"{"recipe":{"kind":"ray","rays":["1,0","1,1"],"ambient_dim":2}}"#,
    )
    .unwrap();
    let out = run(&["validate", &path.to_string_lossy()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(
        stderr(&out).contains("not closed under orthocomplement"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn facts_listing() {
    let c1 = run(&["facts", &fixture("models/c1.json")]);
    assert_eq!(code(&c1), 0);
    let text = stdout(&c1);
    assert!(text.starts_with("4 fact(s)"), "{text}");
    assert!(text.contains("ZERO"));
    assert!(text.contains("TOP"));
    // C1 is projective, so the carrier is also the unit fact
    let top_line = text.lines().find(|l| l.contains("TOP")).unwrap();
    assert!(top_line.contains("ONE"), "{top_line}");
    assert!(top_line.contains("VALID"));

    let b1 = run(&["facts", &fixture("models/b1.json")]);
    let text = stdout(&b1);
    assert!(text.starts_with("6 fact(s)"), "{text}");
    // B1 is projective, so its carrier doubles as the unit fact
    let top_line = text.lines().find(|l| l.contains("TOP")).unwrap();
    assert!(top_line.contains("ONE"), "{top_line}");
}

#[test]
fn facts_of_a_nonprojective_structure_split_one_from_top() {
    // find a non-projective structure in the enumeration and address it
    // through an enumerated-recipe model file
    let index = qphase::model::enumerate_qstructures(2)
        .unwrap()
        .position(|q| !q.is_projective())
        .expect("non-projective structures exist at size 2");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonproj.json");
    std::fs::write(
        &path,
        format!(r#"{{"recipe":{{"kind":"enumerated","size":2,"index":{index}}}}}"#),
    )
    .unwrap();
    let out = run(&["facts", &path.to_string_lossy()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let one_line = text.lines().find(|l| l.contains("ONE")).unwrap();
    assert!(
        !one_line.contains("TOP"),
        "expected the unit fact to differ from the carrier:\n{text}"
    );
}

#[test]
fn eval_prints_the_fact() {
    let out = run(&[
        "eval",
        &fixture("models/c1.json"),
        &fixture("assignments/c1_a.json"),
        "~a",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "{eq, e0}");

    // unbound atom is an input error
    let bad = run(&[
        "eval",
        &fixture("models/c1.json"),
        &fixture("assignments/c1_a.json"),
        "~b",
    ]);
    assert_eq!(code(&bad), 2);

    // parse error with position
    let syntax = run(&[
        "eval",
        &fixture("models/c1.json"),
        &fixture("assignments/c1_a.json"),
        "a * b | c",
    ]);
    assert_eq!(code(&syntax), 2);
    assert!(stderr(&syntax).contains("parse error at byte 6"));
}

#[test]
fn check_decides_validity() {
    let invalid = run(&[
        "check",
        &fixture("models/b1.json"),
        &fixture("assignments/b1_ab.json"),
        "a*b |- b*a",
    ]);
    assert_eq!(code(&invalid), 1);
    assert_eq!(stdout(&invalid).trim(), "invalid");

    let valid = run(&[
        "check",
        &fixture("models/b1.json"),
        &fixture("assignments/b1_ab.json"),
        "|- ~a, a",
    ]);
    assert_eq!(code(&valid), 0);
    assert_eq!(stdout(&valid).trim(), "valid");

    let unit = run(&[
        "check",
        &fixture("models/c1.json"),
        &fixture("assignments/empty.json"),
        "1 |- 1",
    ]);
    assert_eq!(code(&unit), 0);
}

#[test]
fn prove_then_check_proof_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let proof_path = dir.path().join("axiom.json");
    let proof_str = proof_path.to_string_lossy().into_owned();

    let prove = run(&["prove", "|- ~a, a", "--depth", "2", "--out", &proof_str]);
    assert_eq!(code(&prove), 0, "{}", stderr(&prove));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&proof_path).unwrap()).unwrap();
    assert_eq!(json["rule"], "AxId");

    let check = run(&["check-proof", &proof_str]);
    assert_eq!(code(&check), 0);
    assert!(stdout(&check).contains("ok"));

    let not_found = run(&["prove", "|- a, b", "--depth", "3"]);
    assert_eq!(code(&not_found), 1);
    assert!(stderr(&not_found).contains("not found"));
}

#[test]
fn check_proof_on_bundled_fixtures() {
    for rel in ["proofs/axid.json", "proofs/ex1_axid.json", "proofs/tensor_example.json"] {
        let out = run(&["check-proof", &fixture(rel)]);
        assert_eq!(code(&out), 0, "{rel}: {}", stdout(&out));
    }
    let rejected = run(&["check-proof", &fixture("proofs/malformed/m16_tensorr_order.json")]);
    assert_eq!(code(&rejected), 1);
    assert!(stdout(&rejected).contains("TensorR"));

    // file with an unknown rule name is an input error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rule":"Nope","conclusion":"|- a"}"#).unwrap();
    let out = run(&["check-proof", &bad.to_string_lossy()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn falsify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let cm_path = dir.path().join("cm.json");
    let cm_str = cm_path.to_string_lossy().into_owned();

    let found = run(&[
        "falsify", "a*b |- b*a", "--max-size", "6", "--seed", "1", "--budget", "10000",
        "--out", &cm_str,
    ]);
    assert_eq!(code(&found), 0, "{}", stderr(&found));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cm_path).unwrap()).unwrap();
    assert_eq!(json["sequent"], "(a * b) |- (b * a)");
    assert!(json["model"]["dot"].is_array());

    let none = run(&["falsify", "|- ~a, a", "--budget", "3000"]);
    assert_eq!(code(&none), 1);
    assert!(stdout(&none).contains("inconclusive"));
}

#[test]
fn harness_reports() {
    let clean = run(&[
        "harness", "--rule", "TensorR", "--trials", "300", "--seed", "3",
    ]);
    assert_eq!(code(&clean), 0, "{}", stdout(&clean));
    assert!(stdout(&clean).contains("0 violation(s)"));

    let dirty = run(&[
        "harness", "--rule", "WR", "--trials", "3000", "--seed", "3", "--models",
        "unconstrained",
    ]);
    assert_eq!(code(&dirty), 1);
    assert!(stdout(&dirty).contains("violation at trial"));

    let projective = run(&[
        "harness", "--rule", "WR", "--trials", "500", "--seed", "3", "--mode", "projective",
    ]);
    assert_eq!(code(&projective), 0, "{}", stdout(&projective));
}

#[test]
fn baby_subcommands() {
    let proj = run(&["baby", "project", "1,1", "1,0", "--dim", "2"]);
    assert_eq!(code(&proj), 0);
    assert_eq!(stdout(&proj).trim(), "span[1,0]");

    let comp = run(&["baby", "complement", "1,0", "--dim", "2"]);
    assert_eq!(code(&comp), 0);
    assert_eq!(stdout(&comp).trim(), "span[0,1]");

    let zero = run(&["baby", "complement", "1,0;0,1", "--dim", "2"]);
    assert_eq!(code(&zero), 0);
    assert!(stdout(&zero).contains("span[]"));

    let lemma = run(&[
        "baby", "test-lemma1", "--dim", "4", "--trials", "500", "--seed", "7",
    ]);
    assert_eq!(code(&lemma), 0);
    assert_eq!(stdout(&lemma).trim(), "500/500 pass");

    let bad = run(&["baby", "project", "1,x", "1,0", "--dim", "2"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn enumerate_and_random_model() {
    let n1 = run(&["enumerate", "--size", "1"]);
    assert_eq!(code(&n1), 0);
    assert!(stdout(&n1).contains("size 1: 2 valid structure(s)"));

    let n2 = run(&["enumerate", "--size", "2", "--show", "1"]);
    assert!(stdout(&n2).contains("# structure 0"));
    assert!(stdout(&n2).contains("size 2: 8 valid structure(s)"));

    let too_big = run(&["enumerate", "--size", "5"]);
    assert_eq!(code(&too_big), 2);

    let a = run(&["random-model", "--size", "4", "--seed", "9"]);
    let b = run(&["random-model", "--size", "4", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b), "same seed must reproduce the model");
    let json: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(json["size"], 4);

    let projective = run(&[
        "random-model", "--size", "4", "--seed", "2", "--projective",
    ]);
    assert_eq!(code(&projective), 0);
}

#[test]
fn nonassoc_witness_script_runs() {
    let script = fixture("scripts/nonassoc_witness.sh");
    let out = Command::new("sh")
        .arg(&script)
        .env("QPHASE_BIN", env!("CARGO_BIN_EXE_qphase"))
        .output()
        .expect("script runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("{r1, 0}"), "{text}");
    assert!(text.contains("{0}"), "{text}");
}
