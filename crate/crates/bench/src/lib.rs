//! Shared fixtures for the engine benchmarks.

use cokahler::graded::{Element, GradedAlgebra};
use cokahler::presentation::{build_from_presentation, BuiltPresentation, FreeElement, Presentation};
use cokahler::scalar::one;
use cokahler::GroupActionSpec;

/// Builds a presentation from generator names/degrees, relations and a
/// differential given as single monomial words.
pub fn pres(
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

/// The exterior algebra on `r` degree-1 generators.
pub fn torus(r: usize) -> GradedAlgebra {
    let names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
    let gens: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    build_from_presentation(&pres(&gens, &[], &[], r))
        .unwrap()
        .algebra()
        .clone()
}

/// The truncated polynomial algebra `Q[u] / u^{n+1}`, `|u| = 2`.
pub fn cpn(n: usize) -> GradedAlgebra {
    let rel: Vec<&str> = vec!["u"; n + 1];
    build_from_presentation(&pres(&[("u", 2)], &[&rel], &[], 2 * (n + 1)))
        .unwrap()
        .algebra()
        .clone()
}

/// The Kodaira-Thurston nilmanifold cdga.
pub fn kodaira_thurston() -> BuiltPresentation {
    build_from_presentation(&pres(
        &[("e1", 1), ("e2", 1), ("e3", 1), ("e4", 1)],
        &[],
        &[("e4", &["e1", "e2"])],
        4,
    ))
    .unwrap()
}

/// A trivial-action mapping torus over `k` with the sum of degree-2
/// classes as the Kahler class.
pub fn trivial_mapping_torus(k: &GradedAlgebra) -> cokahler::CoKahlerModel {
    let action = GroupActionSpec::trivial(k.basis());
    let omega = Element::from_terms(
        k.basis()
            .ids_of_degree(2)
            .iter()
            .map(|&id| (id, one()))
            .collect::<Vec<_>>(),
    );
    cokahler::mapping_torus_algebra(k, &action, &omega).unwrap()
}
