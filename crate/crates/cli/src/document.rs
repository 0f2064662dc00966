//! The `.alg` algebra document format: parsing, validation and emission.
//!
//! A document describes a presented (differential) graded algebra over
//! `Q`, optionally with named classes and a finite cyclic action. All
//! coefficients are strings `"p"` or `"p/q"` with decimal integers.

use std::collections::BTreeMap;
use std::path::Path;

use cokahler::graded::{Element, GradedAlgebra};
use cokahler::presentation::{
    build_from_presentation, BuiltPresentation, FreeElement, Presentation,
};
use cokahler::scalar::parse_rat;
use cokahler::{AlgebraError, GroupActionSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub coefficient_field: String,
    pub truncation_degree: usize,
    pub generators: Vec<GeneratorDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, Vec<Term>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: usize,
}

/// One term of a linear combination: a rational coefficient and a word
/// in generator names, interpreted in written order and then
/// Koszul-normalized.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ActionDecl {
    pub order: usize,
    pub images: BTreeMap<String, Vec<Term>>,
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Json(String),
    #[error("unsupported coefficient field `{0}` (only \"Q\")")]
    BadField(String),
    #[error("{context}: coefficient `{text}` is not a rational \"p\" or \"p/q\"")]
    BadCoefficient { context: String, text: String },
    #[error("{context}: generator `{name}` is not declared")]
    UndeclaredGenerator { context: String, name: String },
    #[error("action images must cover every generator; missing `{0}`")]
    MissingActionImage(String),
    #[error("document `{0}` has no action, which this command requires")]
    NoAction(String),
    #[error("document `{doc}` has no class labeled `{label}`")]
    MissingClass { doc: String, label: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A parsed document together with its realized algebra, validated
/// action and reduced classes.
pub struct LoadedDocument {
    pub doc: AlgebraDocument,
    pub built: BuiltPresentation,
    pub action: Option<GroupActionSpec>,
    pub classes: BTreeMap<String, Element>,
}

pub fn load(path: &Path) -> Result<LoadedDocument, DocError> {
    let text = std::fs::read_to_string(path).map_err(|e| DocError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<LoadedDocument, DocError> {
    let doc: AlgebraDocument =
        serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))?;
    realize(doc)
}

pub fn realize(doc: AlgebraDocument) -> Result<LoadedDocument, DocError> {
    if doc.coefficient_field != "Q" {
        return Err(DocError::BadField(doc.coefficient_field.clone()));
    }
    let generators: Vec<(String, usize)> = doc
        .generators
        .iter()
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    let gen_index = |context: &str, name: &str| -> Result<usize, DocError> {
        generators
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| DocError::UndeclaredGenerator {
                context: context.to_string(),
                name: name.to_string(),
            })
    };
    let degrees: Vec<usize> = generators.iter().map(|(_, d)| *d).collect();
    let free = |context: &str, terms: &[Term]| -> Result<FreeElement, DocError> {
        let mut out = FreeElement::zero();
        for t in terms {
            let c = parse_rat(&t.coeff).ok_or_else(|| DocError::BadCoefficient {
                context: context.to_string(),
                text: t.coeff.clone(),
            })?;
            let word: Vec<usize> = t
                .monomial
                .iter()
                .map(|n| gen_index(context, n))
                .collect::<Result<_, _>>()?;
            if let Some((m, s)) = FreeElement::normalize_word(&word, &degrees, c) {
                out.add_term(m, s);
            }
        }
        Ok(out)
    };

    let relations = doc
        .relations
        .iter()
        .enumerate()
        .map(|(i, r)| free(&format!("relation {i}"), r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut differential = BTreeMap::new();
    for (g, terms) in &doc.differential {
        let idx = gen_index("differential", g)?;
        differential.insert(idx, free(&format!("differential of {g}"), terms)?);
    }
    let p = Presentation {
        generators: generators.clone(),
        relations,
        differential,
        truncation: doc.truncation_degree,
    };
    let built = build_from_presentation(&p)?;

    let mut classes = BTreeMap::new();
    for (label, terms) in &doc.classes {
        let f = free(&format!("class {label}"), terms)?;
        classes.insert(label.clone(), built.reduce(&f)?);
    }

    let action = match &doc.action {
        None => None,
        Some(a) => {
            let mut images = Vec::new();
            for (name, _) in &built.presentation.generators {
                let terms = a
                    .images
                    .get(name)
                    .ok_or_else(|| DocError::MissingActionImage(name.clone()))?;
                images.push(free(&format!("action image of {name}"), terms)?);
            }
            let map = built.map_from_generator_images(&images)?;
            let action = GroupActionSpec::new(a.order, map)?;
            action.validate(built.algebra(), Some(&built.cdga))?;
            Some(action)
        }
    };

    Ok(LoadedDocument {
        doc,
        built,
        action,
        classes,
    })
}

pub fn serialize(doc: &AlgebraDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serialization");
    s.push('\n');
    s
}

fn element_terms(h: &GradedAlgebra, x: &Element) -> Vec<Term> {
    x.terms()
        .map(|(id, c)| Term {
            coeff: cokahler::scalar::format_rat(c),
            monomial: vec![h.basis().name(id).to_string()],
        })
        .collect()
}

/// Emits a formal algebra as a document presenting it by one generator
/// per basis element of positive degree plus all pairwise product
/// relations. Rebuilding the document reproduces the algebra exactly;
/// the generous truncation keeps the rebuilt algebra complete whenever
/// the input was.
pub fn document_from_algebra(
    name: &str,
    h: &GradedAlgebra,
    classes: &BTreeMap<String, Element>,
) -> AlgebraDocument {
    let basis = h.basis();
    let top = basis.top_degree();
    let truncation = if basis.is_complete() {
        (2 * top).max(1)
    } else {
        basis.truncation()
    };

    let mut gen_ids: Vec<usize> = Vec::new();
    for deg in 1..=top {
        gen_ids.extend(basis.ids_of_degree(deg));
    }
    let generators: Vec<GeneratorDecl> = gen_ids
        .iter()
        .map(|&id| GeneratorDecl {
            name: basis.name(id).to_string(),
            degree: basis.degree(id),
        })
        .collect();

    let mut relations = Vec::new();
    for (pos_i, &i) in gen_ids.iter().enumerate() {
        for &j in &gen_ids[pos_i..] {
            let di = basis.degree(i);
            let dj = basis.degree(j);
            if di + dj > truncation {
                continue;
            }
            if i == j && di % 2 == 1 {
                continue; // odd squares vanish implicitly
            }
            let prod = h.basis_product(i, j);
            let mut terms = vec![Term {
                coeff: "1".to_string(),
                monomial: vec![basis.name(i).to_string(), basis.name(j).to_string()],
            }];
            for (id, c) in prod.terms() {
                terms.push(Term {
                    coeff: cokahler::scalar::format_rat(&(-c)),
                    monomial: vec![basis.name(id).to_string()],
                });
            }
            relations.push(terms);
        }
    }

    AlgebraDocument {
        name: name.to_string(),
        coefficient_field: "Q".to_string(),
        truncation_degree: truncation,
        generators,
        relations,
        differential: BTreeMap::new(),
        classes: classes
            .iter()
            .map(|(label, x)| (label.clone(), element_terms(h, x)))
            .collect(),
        action: None,
    }
}
