//! Acceptance gate: one test per acceptance criterion, exercising the
//! library and the binary end to end. Each test reports a single
//! pass/fail line through its own name in the test harness output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cokahler::cokahler_model::{mapping_torus_algebra, verify_contraction, CoKahlerModel};
use cokahler::graded::{tensor_product, Element, GradedAlgebra};
use cokahler::presentation::{
    build_from_presentation, BuiltPresentation, FreeElement, Presentation,
};
use cokahler::scalar::{int, one};
use cokahler::sullivan::{
    minimal_model_of_formal, minimal_model_of_formal_seeded, model_fingerprint, models_isomorphic,
    verify_quasi_iso,
};
use cokahler::{
    betti_relation_checks, hard_lefschetz_check, property_b_check, tensor_property_b_probe,
    toral_rank_bound, trc_check, GroupActionSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---- fixtures ---------------------------------------------------------

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../documents")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cokahler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn structured(o: &Output) -> serde_json::Value {
    assert!(o.status.code().is_some(), "{o:?}");
    serde_json::from_slice(&o.stdout).expect("structured report")
}

fn pres(
    gens: &[(&str, usize)],
    rels: &[&[&str]],
    diff: &[(&str, &[&str])],
    trunc: usize,
) -> Presentation {
    let generators: Vec<(String, usize)> = gens.iter().map(|(n, d)| (n.to_string(), *d)).collect();
    let degrees: Vec<usize> = generators.iter().map(|(_, d)| *d).collect();
    let idx = |name: &str| generators.iter().position(|(n, _)| n == name).unwrap();
    let word = |names: &[&str]| -> FreeElement {
        let idxs: Vec<usize> = names.iter().map(|n| idx(n)).collect();
        match FreeElement::normalize_word(&idxs, &degrees, one()) {
            Some((m, c)) => FreeElement::term(m, c),
            None => FreeElement::zero(),
        }
    };
    Presentation {
        generators: generators.clone(),
        relations: rels.iter().map(|r| word(r)).collect(),
        differential: diff.iter().map(|(g, w)| (idx(g), word(w))).collect(),
        truncation: trunc,
    }
}

fn fe(p: &Presentation, terms: &[(i64, &[&str])]) -> FreeElement {
    let degrees = p.degrees();
    let mut out = FreeElement::zero();
    for (c, names) in terms {
        let idxs: Vec<usize> = names.iter().map(|n| p.gen_index(n).unwrap()).collect();
        if let Some((m, s)) = FreeElement::normalize_word(&idxs, &degrees, int(*c)) {
            out.add_term(m, s);
        }
    }
    out
}

fn torus(r: usize) -> GradedAlgebra {
    let names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
    let gens: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    build_from_presentation(&pres(&gens, &[], &[], r))
        .unwrap()
        .algebra()
        .clone()
}

fn cpn(n: usize) -> GradedAlgebra {
    let rel: Vec<&str> = vec!["u"; n + 1];
    build_from_presentation(&pres(&[("u", 2)], &[&rel], &[], 2 * (n + 1)))
        .unwrap()
        .algebra()
        .clone()
}

fn sphere3() -> GradedAlgebra {
    build_from_presentation(&pres(&[("z", 3)], &[], &[], 3))
        .unwrap()
        .algebra()
        .clone()
}

fn t2_rotation() -> (BuiltPresentation, GroupActionSpec, Element) {
    let built = build_from_presentation(&pres(&[("x", 1), ("y", 1)], &[], &[], 2)).unwrap();
    let images = vec![
        fe(&built.presentation, &[(1, &["y"])]),
        fe(&built.presentation, &[(-1, &["x"])]),
    ];
    let g = built.map_from_generator_images(&images).unwrap();
    let action = GroupActionSpec::new(4, g).unwrap();
    let omega = built
        .reduce(&fe(&built.presentation, &[(1, &["x", "y"])]))
        .unwrap();
    (built, action, omega)
}

fn cp1xcp1_swap() -> (BuiltPresentation, GroupActionSpec, Element) {
    let built = build_from_presentation(&pres(
        &[("a", 2), ("b", 2)],
        &[&["a", "a"], &["b", "b"]],
        &[],
        4,
    ))
    .unwrap();
    let images = vec![
        fe(&built.presentation, &[(1, &["b"])]),
        fe(&built.presentation, &[(1, &["a"])]),
    ];
    let g = built.map_from_generator_images(&images).unwrap();
    let action = GroupActionSpec::new(2, g).unwrap();
    let omega = built
        .reduce(&fe(&built.presentation, &[(1, &["a"]), (1, &["b"])]))
        .unwrap();
    (built, action, omega)
}

/// The mapping-torus corpus: Kahler algebras of complex dimension <= 3
/// with a validated action and Kahler class.
fn corpus() -> Vec<CoKahlerModel> {
    let mut out = Vec::new();
    for k in [
        torus(2),
        torus(4),
        torus(6),
        cpn(1),
        cpn(2),
        cpn(3),
        tensor_product(&cpn(1), &cpn(1), None),
        tensor_product(&cpn(1), &cpn(2), None),
        tensor_product(&torus(2), &cpn(1), None),
        tensor_product(&torus(2), &cpn(2), None),
        tensor_product(&torus(4), &cpn(1), None),
    ] {
        let action = GroupActionSpec::trivial(k.basis());
        let omega = Element::from_terms(
            k.basis()
                .ids_of_degree(2)
                .iter()
                .map(|&id| (id, one()))
                .collect::<Vec<_>>(),
        );
        out.push(mapping_torus_algebra(&k, &action, &omega).unwrap());
    }
    let (built, action, omega) = t2_rotation();
    out.push(mapping_torus_algebra(built.algebra(), &action, &omega).unwrap());
    let (built, action, omega) = cp1xcp1_swap();
    out.push(mapping_torus_algebra(built.algebra(), &action, &omega).unwrap());
    out
}

fn emitted_model_degrees(doc: &serde_json::Value) -> (Vec<u64>, Vec<usize>) {
    let mut degrees: Vec<u64> = doc["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["degree"].as_u64().unwrap())
        .collect();
    degrees.sort();
    let diff = doc["differential"].as_object().unwrap();
    assert_eq!(diff.len(), 1, "one differential entry");
    let terms = diff.values().next().unwrap().as_array().unwrap();
    assert_eq!(terms.len(), 1, "single monomial differential");
    let mono = terms[0]["monomial"].as_array().unwrap();
    (degrees, vec![mono.len()])
}

// ---- criteria ---------------------------------------------------------

#[test]
fn criterion_1_example_1_end_to_end() {
    let doc = docs().join("example1.alg");
    let o = run(&[
        "mapping-torus",
        doc.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let v = structured(&o);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 1, 1]));

    let tmp = tempfile::tempdir().unwrap();
    let model_path = tmp.path().join("model.alg");
    let o = run(&[
        "minimal-model",
        doc.to_str().unwrap(),
        "--max-degree",
        "4",
        "--out",
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&model_path).unwrap()).unwrap();
    let (degrees, word_lens) = emitted_model_degrees(&model);
    assert_eq!(degrees, vec![1, 2, 3], "generator degrees {{1,2,3}}");
    assert_eq!(word_lens, vec![2], "dv = u^2");

    let o = run(&[
        "check-split",
        doc.to_str().unwrap(),
        "--max-degree",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

#[test]
fn criterion_2_example_2_end_to_end() {
    let doc = docs().join("example2.alg");
    let o = run(&[
        "mapping-torus",
        doc.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let v = structured(&o);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 1, 1, 1, 1]));

    let tmp = tempfile::tempdir().unwrap();
    let model_path = tmp.path().join("model.alg");
    let o = run(&[
        "minimal-model",
        doc.to_str().unwrap(),
        "--max-degree",
        "6",
        "--out",
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&model_path).unwrap()).unwrap();
    let (degrees, word_lens) = emitted_model_degrees(&model);
    assert_eq!(degrees, vec![1, 2, 5], "generator degrees {{1,2,5}}");
    assert_eq!(word_lens, vec![3], "dv = u^3");

    // co-Kahler Lefschetz for p = 0, 1, 2
    let o = run(&[
        "check-cokahler-lefschetz",
        doc.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let v = structured(&o);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3, "entries for p = 0, 1, 2");
    assert!(checks.iter().all(|c| c["status"] == "pass"));

    // L^1(eta) = [omega^2] = 2[ab], computed on the library model
    let (built, action, omega) = cp1xcp1_swap();
    let model = mapping_torus_algebra(built.algebra(), &action, &omega).unwrap();
    let image = model.lefschetz_apply(1, &model.eta_element()).unwrap();
    let omega_sq = model
        .algebra
        .multiply(&model.omega, &model.omega)
        .unwrap();
    assert_eq!(image, omega_sq);
    let deg4 = model.basis().ids_of_degree(4);
    assert_eq!(deg4.len(), 1);
    assert_eq!(image, Element::term(deg4[0], int(2)), "L^1(eta) = 2[ab]");
}

#[test]
fn criterion_3_hard_lefschetz_discrimination() {
    // CP^n, n <= 4, with omega = u
    for n in 1..=4 {
        let h = cpn(n);
        let omega = Element::basis(h.basis().ids_of_degree(2)[0]);
        let report = hard_lefschetz_check(&h, &omega, n).unwrap();
        assert!(report.passed(), "CP^{n}");
    }
    // T^2 and T^4 with the standard symplectic class
    let t2 = build_from_presentation(&pres(&[("x", 1), ("y", 1)], &[], &[], 2)).unwrap();
    let omega = t2
        .reduce(&fe(&t2.presentation, &[(1, &["x", "y"])]))
        .unwrap();
    assert!(hard_lefschetz_check(t2.algebra(), &omega, 1).unwrap().passed());

    let t4 = build_from_presentation(&pres(
        &[("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)],
        &[],
        &[],
        4,
    ))
    .unwrap();
    let omega = t4
        .reduce(&fe(
            &t4.presentation,
            &[(1, &["e1", "e3"]), (1, &["e2", "e4"])],
        ))
        .unwrap();
    assert!(hard_lefschetz_check(t4.algebra(), &omega, 2).unwrap().passed());

    // Kodaira-Thurston fails exactly at p = 1
    let kt = build_from_presentation(&pres(
        &[("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)],
        &[],
        &[("e4", &["e1", "e2"])],
        4,
    ))
    .unwrap();
    let h = cokahler::cohomology(&kt.cdga).unwrap();
    let omega_src = kt
        .reduce(&fe(&kt.presentation, &[(1, &["e1", "e3"]), (1, &["e2", "e4"])]))
        .unwrap();
    let omega = h.class_of(kt.cdga.basis(), &omega_src).unwrap();
    let report = hard_lefschetz_check(&h.algebra, &omega, 2).unwrap();
    assert!(!report.passed());
    assert!(report.entries[0].iso);
    assert!(!report.entries[1].iso, "fails at p = 1");
}

#[test]
fn criterion_4_property_b_suite() {
    let mut passing: Vec<GradedAlgebra> = Vec::new();
    for r in 1..=4 {
        let h = torus(r);
        assert!(property_b_check(&h).unwrap().passed(), "T^{r}");
        passing.push(h);
    }
    for n in 1..=4 {
        let h = cpn(n);
        assert!(property_b_check(&h).unwrap().passed(), "CP^{n}");
        passing.push(h);
    }

    let outcome = property_b_check(&sphere3()).unwrap();
    assert!(!outcome.passed());
    let witness = outcome.witness.expect("explicit derivation witness");
    assert_eq!(witness.k, -3);
    assert!(!witness.is_zero());

    // 25 randomized tensor pairs of passing algebras, total dim <= 40
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0usize;
    while checked < 25 {
        let a = &passing[rng.gen_range(0..passing.len())];
        let b = &passing[rng.gen_range(0..passing.len())];
        if a.total_dimension() * b.total_dimension() > 40 {
            continue;
        }
        let report = tensor_property_b_probe(a, b).unwrap();
        assert!(report.passed(), "pair {checked}: {report}");
        checked += 1;
    }
}

#[test]
fn criterion_5_betti_relations_on_the_corpus() {
    let corpus = corpus();
    assert!(corpus.len() >= 10, "corpus has {} instances", corpus.len());
    for model in &corpus {
        assert!(model.n <= 3);
        let report = betti_relation_checks(model);
        assert!(
            report.passed(),
            "betti relations fail on a corpus model: {report}"
        );
    }
}

#[test]
fn criterion_6_toral_rank_certificates() {
    // odd tori achieve equality in dim H >= 2^r
    for n in 0..=2 {
        let r = 2 * n + 1;
        let h = torus(r);
        let (report, cert) = trc_check(&h).unwrap();
        assert!(report.passed());
        assert_eq!(cert.r, r);
        assert_eq!(h.total_dimension(), 1usize << r, "slack 0 on T^{r}");
    }
    // every mapping-torus model certifies r >= 1 with eta as a witness
    for model in corpus() {
        let (report, cert) = trc_check(&model.algebra).unwrap();
        assert!(report.passed());
        assert!(cert.r >= 1);
        assert!(cert.witnesses.contains(&model.eta_element()));
    }
    // toral-rank bound 1 on both worked examples
    let (built, action, _) = t2_rotation();
    assert_eq!(toral_rank_bound(built.algebra(), &action).unwrap(), 1);
    let (built, action, _) = cp1xcp1_swap();
    assert_eq!(toral_rank_bound(built.algebra(), &action).unwrap(), 1);
}

#[test]
fn criterion_7_model_validity_and_uniqueness() {
    let targets: Vec<(GradedAlgebra, usize)> = {
        let (built, action, omega) = t2_rotation();
        let m1 = mapping_torus_algebra(built.algebra(), &action, &omega).unwrap();
        let (built, action, omega) = cp1xcp1_swap();
        let m2 = mapping_torus_algebra(built.algebra(), &action, &omega).unwrap();
        vec![
            (m1.algebra, 4),
            (m2.algebra, 6),
            (torus(3), 3),
            (cpn(2), 6),
            (tensor_product(&torus(2), &cpn(1), None), 4),
        ]
    };
    for (h, n) in &targets {
        let (s, phi) = minimal_model_of_formal(h, *n).unwrap();
        assert!(s.is_minimal(), "no linear differential terms");
        assert!(cokahler::axioms::cdga_is_valid(&s.built.cdga), "d^2 = 0");
        let quasi = verify_quasi_iso(&s, &phi, h, *n).unwrap();
        for (p, check) in quasi.checks.iter().enumerate().take(*n) {
            assert_eq!(
                check.status,
                cokahler::CheckStatus::Pass,
                "H^{p} not bijective"
            );
        }
        // uniqueness: a permuted-choice rebuild is isomorphic
        let (s2, phi2) = minimal_model_of_formal_seeded(h, *n, 1).unwrap();
        assert_eq!(model_fingerprint(&s, *n), model_fingerprint(&s2, *n));
        assert_eq!(
            models_isomorphic(&s, &phi, &s2, &phi2, h).unwrap(),
            Some(true)
        );
    }
}

#[test]
fn criterion_8_randomized_engine_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let pool = [torus(1), torus(2), torus(3), cpn(1), cpn(2), cpn(3)];

    // random products stay within the axioms
    for _ in 0..20 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if a.total_dimension() * b.total_dimension() > 64 {
            continue;
        }
        let t = tensor_product(a, b, None);
        assert!(cokahler::axioms::verify_graded_algebra(&t).passed());
    }

    // random differentials on a degree-1 frame obey Leibniz and d^2 = 0
    let names = ["e1", "e2", "e3", "e4"];
    for _ in 0..10 {
        let pairs = [
            ("e1", "e2"),
            ("e1", "e3"),
            ("e2", "e3"),
        ];
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        let gens: Vec<(&str, usize)> = names.iter().map(|n| (*n, 1)).collect();
        let built =
            build_from_presentation(&pres(&gens, &[], &[("e4", &[a, b])], 4)).unwrap();
        assert!(cokahler::axioms::verify_cdga(&built.cdga).passed());
    }

    // contraction and eta-split laws on random mapping-torus models
    let kahler_pool: Vec<&GradedAlgebra> = pool
        .iter()
        .filter(|k| k.basis().top_degree() % 2 == 0)
        .collect();
    for _ in 0..5 {
        let k = kahler_pool[rng.gen_range(0..kahler_pool.len())];
        let omega = Element::from_terms(
            k.basis()
                .ids_of_degree(2)
                .iter()
                .map(|&id| (id, one()))
                .collect::<Vec<_>>(),
        );
        if omega.is_zero() {
            continue;
        }
        let action = GroupActionSpec::trivial(k.basis());
        let model = mapping_torus_algebra(k, &action, &omega).unwrap();
        if model.algebra.total_dimension() > 64 {
            continue;
        }
        assert!(verify_contraction(&model).unwrap().passed());
        for deg in 0..=model.basis().top_degree() {
            let x = Element::from_terms(
                model
                    .basis()
                    .ids_of_degree(deg)
                    .iter()
                    .map(|&id| (id, int(rng.gen_range(-3..=3))))
                    .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                    .collect::<Vec<_>>(),
            );
            assert!(model.contract_xi(&model.contract_xi(&x)).is_zero());
            let (x1, x2) = model.eta_split(&x).unwrap();
            assert_eq!(x1.add(&x2), x);
            assert!(model.contract_xi(&x1).is_zero());
            assert!(model
                .algebra
                .multiply(&model.eta_element(), &x2)
                .unwrap()
                .is_zero());
        }
    }
}
