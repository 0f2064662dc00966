//! End-to-end tests of the `cokahler` binary: exit codes, document
//! round trips and report formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../documents")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cokahler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn mapping_torus_then_betti_relations_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m2.alg");
    let doc = docs().join("example2.alg");
    let o = run(&[
        "mapping-torus",
        doc.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("betti: (1,1,1,1,1,1)"));

    let o = run(&["betti-relations", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).contains("betti: (1,1,1,1,1,1)"));
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn property_b_fails_on_sphere_with_witness() {
    let doc = docs().join("s3.alg");
    let o = run(&["property-b", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("theta(z)"), "witness in {}", stdout(&o));
}

#[test]
fn minimal_model_emits_the_expected_generators() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("model1.alg");
    let doc = docs().join("example1.alg");
    let o = run(&[
        "minimal-model",
        doc.to_str().unwrap(),
        "--max-degree",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut degrees: Vec<u64> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["degree"].as_u64().unwrap())
        .collect();
    degrees.sort();
    assert_eq!(degrees, vec![1, 2, 3]);
    // dv = u^2: the single differential entry is a square of the
    // degree-2 generator
    let diff = v["differential"].as_object().unwrap();
    assert_eq!(diff.len(), 1);
    let terms = diff.values().next().unwrap().as_array().unwrap();
    assert_eq!(terms.len(), 1);
    let mono = terms[0]["monomial"].as_array().unwrap();
    assert_eq!(mono.len(), 2);
    assert_eq!(mono[0], mono[1]);
}

#[test]
fn check_kahler_discriminates() {
    let o = run(&["check-kahler", docs().join("cp2.alg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let o = run(&[
        "check-kahler",
        docs().join("kodaira-thurston.alg").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    assert!(stdout(&o).contains("H^1 -> H^3"));
}

#[test]
fn invalid_documents_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.alg");
    std::fs::write(&bad, "{\"name\": \"broken\"").unwrap();
    let o = run(&["cohomology", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let missing = tmp.path().join("missing.alg");
    let o = run(&["cohomology", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    // structurally valid JSON with an undeclared generator
    let undeclared = tmp.path().join("undeclared.alg");
    std::fs::write(
        &undeclared,
        r#"{
  "name": "undeclared",
  "coefficient_field": "Q",
  "truncation_degree": 2,
  "generators": [{"name": "x", "degree": 1}],
  "relations": [[{"coeff": "1", "monomial": ["x", "w"]}]]
}"#,
    )
    .unwrap();
    let o = run(&["cohomology", undeclared.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`w`"));
}

#[test]
fn structured_reports_are_json_and_deterministic() {
    let doc = docs().join("example1.alg");
    let run_once = || {
        let o = run(&["cohomology", doc.to_str().unwrap(), "--format", "structured"]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let a = run_once();
    let b = run_once();
    assert_eq!(a, b, "byte-identical across runs");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
}

#[test]
fn invariants_of_the_order_four_rotation() {
    let o = run(&["invariants", docs().join("example1.alg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("betti: (1,0,1)"));
}

#[test]
fn toral_bound_is_one_on_both_examples() {
    for name in ["example1.alg", "example2.alg"] {
        let o = run(&["toral-bound", docs().join(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("bound: 1"), "{name}: {}", stdout(&o));
    }
}

#[test]
fn batch_mode_aggregates_severity() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["cp2.alg", "s3.alg"] {
        std::fs::copy(docs().join(name), tmp.path().join(name)).unwrap();
    }
    // property-b passes on cp2 but fails on s3, so the batch fails
    let o = run(&["property-b", "--batch", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("cp2.alg"));
    assert!(text.contains("s3.alg"));
}

#[test]
fn check_split_passes_on_both_examples() {
    for (name, n) in [("example1.alg", "4"), ("example2.alg", "6")] {
        let o = run(&[
            "check-split",
            docs().join(name).to_str().unwrap(),
            "--max-degree",
            n,
        ]);
        assert_eq!(o.status.code(), Some(0), "{name}: {o:?}");
    }
}

#[test]
fn check_axioms_passes_on_every_shipped_document() {
    for entry in std::fs::read_dir(docs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("alg") {
            continue;
        }
        let o = run(&["check-axioms", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{path:?}");
    }
}
