//! Shared fixtures for unit tests across modules.

use crate::presentation::{FreeElement, Presentation};
use crate::scalar::int;

/// Builds a presentation from generator names/degrees, relations and a
/// differential given as single monomial words.
pub(crate) fn pres(
    gens: &[(&str, usize)],
    rels: &[&[&str]],
    diff: &[(&str, &[&str])],
    trunc: usize,
) -> Presentation {
    let generators: Vec<(String, usize)> = gens.iter().map(|(n, d)| (n.to_string(), *d)).collect();
    let degrees: Vec<usize> = generators.iter().map(|(_, d)| *d).collect();
    let gen_idx = |name: &str| {
        generators
            .iter()
            .position(|(n, _)| n == name)
            .expect("known generator")
    };
    let word = |names: &[&str]| -> FreeElement {
        let idxs: Vec<usize> = names.iter().map(|n| gen_idx(n)).collect();
        match FreeElement::normalize_word(&idxs, &degrees, crate::scalar::one()) {
            Some((m, c)) => FreeElement::term(m, c),
            None => FreeElement::zero(),
        }
    };
    let relations = rels.iter().map(|r| word(r)).collect();
    let differential = diff.iter().map(|(g, w)| (gen_idx(g), word(w))).collect();
    Presentation {
        generators,
        relations,
        differential,
        truncation: trunc,
    }
}

/// Builds a free-algebra element as an integer combination of words in
/// the generators of `p`.
pub(crate) fn fe(p: &Presentation, terms: &[(i64, &[&str])]) -> FreeElement {
    let degrees = p.degrees();
    let mut out = FreeElement::zero();
    for (c, names) in terms {
        let idxs: Vec<usize> = names
            .iter()
            .map(|n| p.gen_index(n).expect("known generator"))
            .collect();
        if let Some((m, s)) = FreeElement::normalize_word(&idxs, &degrees, int(*c)) {
            out.add_term(m, s);
        }
    }
    out
}
