//! Subcommand implementations: each consumes a loaded document and
//! produces a structured report, independent of output formatting.

use std::collections::BTreeMap;

use cokahler::cokahler_model::{
    betti_relation_checks, cokahler_model_from_classes, mapping_torus_algebra, CoKahlerModel,
};
use cokahler::graded::{Element, GradedAlgebra};
use cokahler::report::{CheckStatus, Report};
use cokahler::sullivan::{minimal_model_of_formal, model_tensor_split_check, verify_quasi_iso};
use cokahler::{
    cohomology, induce_on_cohomology, invariant_subalgebra, property_b_check, toral_rank_bound,
    trc_check, AlgebraError, Check, GroupActionSpec,
};
use serde::Serialize;

use crate::document::{document_from_algebra, AlgebraDocument, DocError, LoadedDocument, Term};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Machine-readable report; the text rendering derives from the same
/// data, so both agree on the verdict by construction.
#[derive(Debug, Clone, Serialize)]
pub struct CliReport {
    pub command: String,
    pub verdict: String,
    pub checks: Vec<CheckOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<AlgebraDocument>,
}

impl CliReport {
    fn from_report(command: &str, report: &Report) -> CliReport {
        CliReport {
            command: command.to_string(),
            verdict: report.verdict().to_string(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckOut {
                    name: c.name.clone(),
                    status: c.status.to_string(),
                    witness: c.witness.clone(),
                })
                .collect(),
            betti: None,
            bound: None,
            model: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "pass" => 0,
            "fail" => 1,
            "inconclusive" => 3,
            _ => 2,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(b) = &self.betti {
            let list: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("betti: ({})\n", list.join(",")));
        }
        if let Some(b) = &self.bound {
            out.push_str(&format!("bound: {b}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}", c.status, c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" — {w}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

/// Betti numbers up to the top non-zero degree (the raw vector runs to
/// the truncation degree, padding with zeros).
fn betti(h: &GradedAlgebra) -> Vec<usize> {
    let mut b = h.betti_numbers();
    b.truncate(h.basis().top_degree() + 1);
    b
}

/// Flags shared by every command.
pub struct Options {
    pub max_degree: Option<usize>,
    pub omega: String,
    pub eta: String,
    pub dim: Option<usize>,
}

/// The document's data with the differential already taken: the formal
/// algebra every downstream check runs on, plus the action and classes
/// transported to it.
struct Resolved {
    algebra: GradedAlgebra,
    action: Option<GroupActionSpec>,
    classes: BTreeMap<String, Element>,
}

fn resolve(l: &LoadedDocument) -> Result<Resolved, DocError> {
    if l.built.cdga.is_zero_differential() {
        return Ok(Resolved {
            algebra: l.built.algebra().clone(),
            action: l.action.clone(),
            classes: l.classes.clone(),
        });
    }
    let ring = cohomology(&l.built.cdga)?;
    let action = match &l.action {
        Some(a) => Some(induce_on_cohomology(a, &l.built.cdga, &ring)?),
        None => None,
    };
    let mut classes = BTreeMap::new();
    for (label, x) in &l.classes {
        classes.insert(label.clone(), ring.class_of(l.built.cdga.basis(), x)?);
    }
    Ok(Resolved {
        algebra: ring.algebra,
        action,
        classes,
    })
}

fn require_action(l: &LoadedDocument, r: &Resolved) -> Result<GroupActionSpec, DocError> {
    r.action
        .clone()
        .ok_or_else(|| DocError::NoAction(l.doc.name.clone()))
}

fn require_class<'a>(
    l: &LoadedDocument,
    r: &'a Resolved,
    label: &str,
) -> Result<&'a Element, DocError> {
    r.classes.get(label).ok_or_else(|| DocError::MissingClass {
        doc: l.doc.name.clone(),
        label: label.to_string(),
    })
}

/// Obtains a co-Kahler model: synthesized from an action and a Kahler
/// class when present, otherwise reconstructed from labeled eta/omega
/// classes.
fn resolve_model(l: &LoadedDocument, opts: &Options) -> Result<CoKahlerModel, DocError> {
    let r = resolve(l)?;
    if r.action.is_some() && r.classes.contains_key(&opts.omega) {
        let action = require_action(l, &r)?;
        let omega = require_class(l, &r, &opts.omega)?;
        return Ok(mapping_torus_algebra(&r.algebra, &action, omega)?);
    }
    let omega = require_class(l, &r, &opts.omega)?;
    let eta = require_class(l, &r, &opts.eta)?;
    Ok(cokahler_model_from_classes(&r.algebra, omega.clone(), eta)?)
}

fn check_degree_cap(l: &LoadedDocument, opts: &Options) -> Result<(), DocError> {
    if let Some(n) = opts.max_degree {
        let basis = l.built.cdga.basis();
        if n > basis.truncation() && !basis.is_complete() {
            return Err(DocError::Algebra(AlgebraError::ModelDegreeAboveTruncation {
                n,
                truncation: basis.truncation(),
            }));
        }
    }
    Ok(())
}

pub fn check_axioms(l: &LoadedDocument) -> Result<CliReport, DocError> {
    let report = cokahler::axioms::verify_cdga(&l.built.cdga);
    Ok(CliReport::from_report("check-axioms", &report))
}

pub fn cohomology_cmd(l: &LoadedDocument) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    let mut out = CliReport::from_report("cohomology", &Report::new());
    out.verdict = CheckStatus::Pass.to_string();
    out.checks.push(CheckOut {
        name: "cohomology ring computed".to_string(),
        status: "pass".to_string(),
        witness: None,
    });
    out.betti = Some(betti(&r.algebra));
    Ok(out)
}

pub fn invariants(l: &LoadedDocument) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    let action = require_action(l, &r)?;
    let inv = invariant_subalgebra(&r.algebra, &action)?;
    let mut out = CliReport::from_report("invariants", &Report::new());
    out.verdict = CheckStatus::Pass.to_string();
    out.checks.push(CheckOut {
        name: format!("invariant subalgebra of the order-{} action", action.order),
        status: "pass".to_string(),
        witness: None,
    });
    out.betti = Some(betti(&inv.algebra));
    Ok(out)
}

pub fn check_kahler(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    check_degree_cap(l, opts)?;
    let r = resolve(l)?;
    let omega = require_class(l, &r, &opts.omega)?;
    let top = r.algebra.basis().top_degree();
    if top % 2 != 0 {
        return Err(DocError::Algebra(AlgebraError::MalformedAlgebra(format!(
            "hard Lefschetz needs even formal dimension, top degree is {top}"
        ))));
    }
    let lef = cokahler::hard_lefschetz_check(&r.algebra, omega, top / 2)?;
    let mut out = CliReport::from_report("check-kahler", &lef.report);
    out.betti = Some(betti(&r.algebra));
    Ok(out)
}

pub fn mapping_torus(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    let action = require_action(l, &r)?;
    let omega = require_class(l, &r, &opts.omega)?;
    let model = mapping_torus_algebra(&r.algebra, &action, omega)?;
    let mut classes = BTreeMap::new();
    classes.insert(opts.eta.clone(), model.eta_element());
    classes.insert(opts.omega.clone(), model.omega.clone());
    let doc = document_from_algebra(
        &format!("{}-mapping-torus", l.doc.name),
        &model.algebra,
        &classes,
    );
    let mut out = CliReport::from_report("mapping-torus", &Report::new());
    out.verdict = CheckStatus::Pass.to_string();
    out.checks.push(CheckOut {
        name: format!(
            "mapping-torus cohomology synthesized (formal dimension {})",
            2 * model.n + 1
        ),
        status: "pass".to_string(),
        witness: None,
    });
    out.betti = Some(betti(&model.algebra));
    out.model = Some(doc);
    Ok(out)
}

pub fn check_cokahler_lefschetz(
    l: &LoadedDocument,
    opts: &Options,
) -> Result<CliReport, DocError> {
    check_degree_cap(l, opts)?;
    let model = resolve_model(l, opts)?;
    let lef = model.lefschetz_report()?;
    let mut out = CliReport::from_report("check-cokahler-lefschetz", &lef.report);
    out.betti = Some(betti(&model.algebra));
    Ok(out)
}

pub fn betti_relations(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    let model = resolve_model(l, opts)?;
    let report = betti_relation_checks(&model);
    let mut out = CliReport::from_report("betti-relations", &report);
    out.betti = Some(betti(&model.algebra));
    Ok(out)
}

pub fn property_b(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    if let Some(cap) = opts.dim {
        if r.algebra.total_dimension() > cap {
            return Err(DocError::Algebra(AlgebraError::MalformedAlgebra(format!(
                "algebra dimension {} exceeds the --dim cap {cap}",
                r.algebra.total_dimension()
            ))));
        }
    }
    let outcome = property_b_check(&r.algebra)?;
    Ok(CliReport::from_report("property-b", &outcome.report))
}

pub fn trc(l: &LoadedDocument) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    let (report, cert) = trc_check(&r.algebra)?;
    let mut out = CliReport::from_report("trc", &report);
    let witnesses: Vec<String> = cert
        .witnesses
        .iter()
        .map(|w| w.render(r.algebra.basis()))
        .collect();
    out.checks.push(CheckOut {
        name: format!("cohomological torus rank r = {}", cert.r),
        status: "pass".to_string(),
        witness: if witnesses.is_empty() {
            None
        } else {
            Some(witnesses.join(", "))
        },
    });
    out.bound = Some(cert.r);
    Ok(out)
}

pub fn toral_bound(l: &LoadedDocument) -> Result<CliReport, DocError> {
    let r = resolve(l)?;
    let action = require_action(l, &r)?;
    let bound = toral_rank_bound(&r.algebra, &action)?;
    let mut out = CliReport::from_report("toral-bound", &Report::new());
    out.verdict = CheckStatus::Pass.to_string();
    out.checks.push(CheckOut {
        name: format!("toral rank of the mapping torus is at most {bound}"),
        status: "pass".to_string(),
        witness: None,
    });
    out.bound = Some(bound);
    Ok(out)
}

pub fn minimal_model(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    let target = if l.action.is_some() && l.classes.contains_key(&opts.omega) {
        resolve_model(l, opts)?.algebra
    } else {
        resolve(l)?.algebra
    };
    let n = opts
        .max_degree
        .unwrap_or_else(|| target.basis().top_degree());
    let (s, phi) = minimal_model_of_formal(&target, n)?;
    let mut report = Report::new();
    report.push(if s.is_minimal() {
        Check::pass("model is minimal (decomposable differential)")
    } else {
        Check::fail(
            "model is minimal (decomposable differential)",
            "a differential has a linear term",
        )
    });
    report.merge(verify_quasi_iso(&s, &phi, &target, n)?);
    let mut out = CliReport::from_report("minimal-model", &report);
    out.model = Some(document_from_model(&format!("{}-model", l.doc.name), &s));
    Ok(out)
}

pub fn check_split(l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
    let model = resolve_model(l, opts)?;
    let n = opts
        .max_degree
        .unwrap_or_else(|| model.basis().top_degree());
    let report = model_tensor_split_check(&model, n)?;
    Ok(CliReport::from_report("check-split", &report))
}

/// Emits a Sullivan algebra as a free presentation with differential.
fn document_from_model(name: &str, s: &cokahler::SullivanAlgebra) -> AlgebraDocument {
    let gens = s.generators();
    let generators = gens
        .iter()
        .map(|(n, d)| crate::document::GeneratorDecl {
            name: n.clone(),
            degree: *d,
        })
        .collect();
    let mut differential = BTreeMap::new();
    for (g, (gname, _)) in gens.iter().enumerate() {
        let img = s.d_image(g);
        if img.is_zero() {
            continue;
        }
        let mut terms = Vec::new();
        for (mono, c) in img.terms() {
            let mut word = Vec::new();
            for (k, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    word.push(gens[k].0.clone());
                }
            }
            terms.push(Term {
                coeff: cokahler::scalar::format_rat(c),
                monomial: word,
            });
        }
        differential.insert(gname.clone(), terms);
    }
    AlgebraDocument {
        name: name.to_string(),
        coefficient_field: "Q".to_string(),
        truncation_degree: s.built.presentation.truncation,
        generators,
        relations: Vec::new(),
        differential,
        classes: BTreeMap::new(),
        action: None,
    }
}
