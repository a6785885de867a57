//! Acceptance gate for the command-line front end: every fixture must
//! produce byte-identical reports across two runs, and exit codes must
//! reflect pass/fail/usage outcomes.

use std::fs;
use std::path::Path;
use std::process::Command;

use novikov_core::cocycles::Cocycle;
use novikov_core::exactmath::{FieldConfig, Scalar};
use novikov_core::groups::GroupSpec;
use novikov_core::io::{abstract_module_to_dto, AlgebraDto};
use novikov_core::modules::{abstract_module, random_invertible_matrix, scramble, ModuleSpec};
use novikov_core::novikov::{AlgebraSpec, JKind, Xi};
use novikov_core::spectral::Window;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_novikov"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Runs the same job twice into separate files; reports must agree byte for
/// byte and both runs must exit with `expect`.
fn run_twice(args: &[&str], input: &str, expect: i32) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("report{run}.json"));
        let status = bin()
            .args(args)
            .args(["--input", input, "--output", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(expect), "args {args:?}");
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "report bytes differ for {args:?}");
    outputs.pop().unwrap()
}

#[test]
fn criterion_8_deterministic_reports() {
    let alg = fixture("algebra_z_nat_xi1.json");
    let module = fixture("module_lambda_half.json");
    let cocycle = fixture("cocycle_rank2.json");
    let lemma = fixture("lemma41.json");

    run_twice(&["algebra", "check", "--alpha-box", "1", "--j-max", "1"], &alg, 0);
    run_twice(&["algebra", "simplicity", "--alpha-box", "1", "--j-max", "1"], &alg, 0);
    run_twice(&["algebra", "spectrum"], &alg, 0);
    run_twice(&["cocycle", "check"], &cocycle, 0);
    run_twice(&["cocycle", "trivialize", "--alpha-box", "3"], &cocycle, 0);
    run_twice(&["module", "build", "--alpha-box", "1", "--j-max", "1", "--pad", "1"], &module, 0);
    run_twice(&["module", "axioms", "--alpha-box", "1", "--j-max", "1"], &module, 0);
    run_twice(&["module", "irreducible", "--alpha-box", "1", "--j-max", "1"], &module, 0);
    run_twice(&["module", "lemma41", "--j-max", "8"], &lemma, 0);

    // disguised weight-1/2 module: classification must recover the weight
    let q = FieldConfig::Rational;
    let spec = AlgebraSpec::new(
        GroupSpec::integers(q),
        Cocycle::trivial(1, q),
        JKind::Nat,
        Xi::Scalar(Scalar::from_int(1, q)),
    )
    .unwrap();
    let half = Scalar::from_int(1, q) * Scalar::from_int(2, q).inv().unwrap();
    let m = ModuleSpec::new(spec.clone(), half).unwrap();
    let w = Window::from_box(&spec, 1, 1, 0);
    let am = abstract_module(&m, &w, 1, 1);
    let p = random_invertible_matrix(am.basis_size(), q, 8);
    let scrambled = scramble(&am, &p);
    let job = serde_json::json!({
        "algebra": serde_json::to_value(AlgebraDto::from_spec(&spec)).unwrap(),
        "module": serde_json::to_value(abstract_module_to_dto(&scrambled)).unwrap(),
    });
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("classify.json");
    fs::write(&input, serde_json::to_string_pretty(&job).unwrap()).unwrap();
    let report = run_twice(&["module", "classify"], input.to_str().unwrap(), 0);
    let report = String::from_utf8(report).unwrap();
    assert!(report.contains("\"lambda\": \"1/2\""), "report: {report}");

    println!("criterion 8 (deterministic command-line reports): PASS");
}

#[test]
fn exit_codes() {
    // malformed JSON → usage error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let status = bin()
        .args(["algebra", "check", "--input", bad.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // missing file → usage error
    let status = bin()
        .args(["algebra", "check", "--input", dir.path().join("absent.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // a failing check → exit 1: junk abstract module can't be classified
    let q = FieldConfig::Rational;
    let spec = AlgebraSpec::new(
        GroupSpec::integers(q),
        Cocycle::trivial(1, q),
        JKind::Nat,
        Xi::Scalar(Scalar::from_int(1, q)),
    )
    .unwrap();
    let m = ModuleSpec::new(spec.clone(), Scalar::from_int(0, q)).unwrap();
    let w = Window::from_box(&spec, 1, 1, 0);
    let mut am = abstract_module(&m, &w, 1, 1);
    for (_, a) in am.left.iter_mut() {
        a.matrix = a.matrix.scale(&Scalar::from_int(0, q));
        a.lossy = false;
    }
    for (_, a) in am.right.iter_mut() {
        a.matrix = a.matrix.scale(&Scalar::from_int(0, q));
        a.lossy = false;
    }
    let job = serde_json::json!({
        "algebra": serde_json::to_value(AlgebraDto::from_spec(&spec)).unwrap(),
        "module": serde_json::to_value(abstract_module_to_dto(&am)).unwrap(),
    });
    let input = dir.path().join("junk.json");
    fs::write(&input, serde_json::to_string(&job).unwrap()).unwrap();
    let status = bin()
        .args(["module", "classify", "--input", input.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
