//! Negative-degree derivation spaces and the Property B decision.
//!
//! A derivation of degree `k < 0` is a linear map lowering degree by
//! `|k|` and satisfying the graded Leibniz rule
//! `theta(xy) = theta(x) y + (-1)^{k|x|} x theta(y)`. Property B holds
//! when every negative-degree derivation vanishing on degree 1 vanishes
//! identically. Derivations are found as the nullspace of the Leibniz
//! constraints, with one unknown per matrix entry of the per-degree
//! blocks.

use crate::error::{AlgebraError, Result};
use crate::graded::{tensor_product, Element, GradedAlgebra, GradedBasis};
use crate::linalg::{Matrix, SparseEliminator};
use crate::report::{Check, Report};
use crate::scalar::{sign_pow, Rat};
use num_traits::Zero;

/// A single degree-`k` derivation, one matrix per source degree.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub k: i64,
    /// matrices[p]: coordinates in degree p -> degree p + k (empty when
    /// the target degree is negative)
    pub matrices: Vec<Matrix>,
}

impl Derivation {
    pub fn apply(&self, basis: &GradedBasis, x: &Element) -> Result<Element> {
        let m = self.k.unsigned_abs() as usize;
        let mut out = Element::zero();
        if x.is_truncated() {
            out.set_truncated();
        }
        for (id, c) in x.terms() {
            let p = basis.degree(id);
            if p < m {
                continue;
            }
            let mat = &self.matrices[p];
            let col = basis.index_in_degree(id);
            for row in 0..mat.rows {
                let v = mat.at(row, col);
                if v.is_zero() {
                    continue;
                }
                let tid = basis.ids_of_degree(p - m)[row];
                out.add_term(tid, c * v);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(|m| m.is_zero())
    }

    /// Lists the nonzero basis images, deterministically.
    pub fn describe(&self, basis: &GradedBasis) -> String {
        let mut parts = Vec::new();
        for id in basis.ids() {
            let img = self
                .apply(basis, &Element::basis(id))
                .expect("basis element is homogeneous");
            if !img.is_zero() {
                parts.push(format!("theta({}) = {}", basis.name(id), img.render(basis)));
            }
        }
        if parts.is_empty() {
            "theta = 0".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Basis of the space of degree-`k` derivations.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub k: i64,
    pub basis: Vec<Derivation>,
    /// false when the algebra is incomplete and constraints from
    /// products above the truncation degree could not be imposed; the
    /// space may then be an overcount
    pub exact: bool,
}

/// Solves for all derivations of negative degree `k`, optionally
/// constrained to vanish on degree 1.
pub fn derivation_space(
    h: &GradedAlgebra,
    k: i64,
    vanish_on_degree_one: bool,
) -> Result<DerivationSpace> {
    if k >= 0 {
        return Err(AlgebraError::DerivationDegreeNotNegative(k));
    }
    let m = k.unsigned_abs() as usize;
    let basis = h.basis();
    let trunc = basis.truncation();
    let complete = basis.is_complete();

    // unknown layout: theta_p is a dim(p-m) x dim(p) block, row-major
    let mut offset = vec![usize::MAX; trunc + 1];
    let mut total = 0usize;
    for p in m..=trunc {
        offset[p] = total;
        total += basis.dim(p - m) * basis.dim(p);
    }
    let unknown = |p: usize, row: usize, col: usize| offset[p] + row * basis.dim(p) + col;

    let mut elim = SparseEliminator::new();
    let mut exact = true;

    if vanish_on_degree_one && m == 1 && 1 <= trunc {
        for col in 0..basis.dim(1) {
            elim.insert(vec![(unknown(1, 0, col), crate::scalar::one())]);
        }
    }

    // Leibniz on every unordered pair of positive-degree basis elements.
    // In a complete algebra pairs whose product lies above the
    // truncation still constrain: the product is genuinely zero while
    // the right-hand side can land within range.
    for i in basis.ids() {
        let di = basis.degree(i);
        if di == 0 {
            continue;
        }
        for j in basis.ids() {
            if j < i {
                continue;
            }
            let dj = basis.degree(j);
            if dj == 0 {
                continue;
            }
            let q = di + dj;
            if q < m || q - m > trunc {
                continue;
            }
            if q > trunc && !complete {
                exact = false;
                continue;
            }
            let prod = h.basis_product(i, j);
            let sign = sign_pow((m * di) as i64);
            let i_col = basis.index_in_degree(i);
            let j_col = basis.index_in_degree(j);
            // one equation per target basis slot in degree q - m
            for u in 0..basis.dim(q - m) {
                let mut row: Vec<(usize, Rat)> = Vec::new();
                // theta(x_i x_j)
                if q <= trunc {
                    for (t, c) in prod.terms() {
                        row.push((unknown(q, u, basis.index_in_degree(t)), c.clone()));
                    }
                }
                // - theta(x_i) x_j
                if di >= m {
                    for (t_row, &tid) in basis.ids_of_degree(di - m).iter().enumerate() {
                        let tp = h.basis_product(tid, j);
                        let c = tp.coords_in_degree(basis, q - m)?[u].clone();
                        if !c.is_zero() {
                            row.push((unknown(di, t_row, i_col), -c));
                        }
                    }
                }
                // - (-1)^{k|x_i|} x_i theta(x_j)
                if dj >= m {
                    for (t_row, &tid) in basis.ids_of_degree(dj - m).iter().enumerate() {
                        let tp = h.basis_product(i, tid);
                        let c = tp.coords_in_degree(basis, q - m)?[u].clone();
                        if !c.is_zero() {
                            row.push((unknown(dj, t_row, j_col), -&sign * c));
                        }
                    }
                }
                row.sort_by_key(|&(c, _)| c);
                // merge duplicate columns
                let mut merged: Vec<(usize, Rat)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|(_, v)| !v.is_zero());
                if !merged.is_empty() {
                    elim.insert(merged);
                }
            }
        }
    }

    let mut derivations = Vec::new();
    for vec in elim.nullspace(total) {
        let mut matrices = Vec::with_capacity(trunc + 1);
        for p in 0..=trunc {
            if p < m {
                matrices.push(Matrix::zeros(0, basis.dim(p)));
                continue;
            }
            let rows = basis.dim(p - m);
            let cols = basis.dim(p);
            let mut mat = Matrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    mat.set(r, c, vec[unknown(p, r, c)].clone());
                }
            }
            matrices.push(mat);
        }
        derivations.push(Derivation { k, matrices });
    }
    Ok(DerivationSpace {
        k,
        basis: derivations,
        exact: exact && complete,
    })
}

/// Outcome of the Property B scan.
#[derive(Debug, Clone)]
pub struct PropertyBOutcome {
    pub report: Report,
    /// smallest |k| failing, with the lexicographically first nonzero
    /// constrained derivation
    pub witness: Option<Derivation>,
}

impl PropertyBOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Checks Property B: every derivation of degree `-1 .. -top` vanishing
/// on degree 1 must vanish identically.
pub fn property_b_check(h: &GradedAlgebra) -> Result<PropertyBOutcome> {
    let top = h.basis().top_degree();
    let mut report = Report::new();
    let mut witness = None;
    for m in 1..=top.max(1) {
        let k = -(m as i64);
        let space = derivation_space(h, k, true)?;
        let label = format!("constrained derivations of degree {k}");
        if !space.basis.is_empty() {
            let theta = space.basis[0].clone();
            report.push(Check::fail(
                label,
                format!(
                    "dimension {}; {}",
                    space.basis.len(),
                    theta.describe(h.basis())
                ),
            ));
            if witness.is_none() {
                witness = Some(theta);
            }
        } else if !space.exact {
            report.push(Check::inconclusive(label, "algebra truncated"));
        } else {
            report.push(Check::pass(label));
        }
    }
    Ok(PropertyBOutcome { report, witness })
}

/// Consistency probe: if `h` and `g` both satisfy Property B then so
/// must their tensor product; a failure here flags an implementation
/// inconsistency rather than interesting mathematics.
pub fn tensor_property_b_probe(h: &GradedAlgebra, g: &GradedAlgebra) -> Result<Report> {
    let mut report = Report::new();
    let left = property_b_check(h)?;
    let right = property_b_check(g)?;
    if !left.passed() || !right.passed() {
        report.push(Check::fail(
            "tensor factors satisfy Property B",
            "a factor fails the precondition".to_string(),
        ));
        return Ok(report);
    }
    report.push(Check::pass("tensor factors satisfy Property B"));
    let t = tensor_product(h, g, None);
    let product = property_b_check(&t)?;
    if product.passed() {
        report.push(Check::pass("tensor product satisfies Property B"));
    } else {
        let msg = product
            .witness
            .map(|w| w.describe(t.basis()))
            .unwrap_or_default();
        report.push(Check::fail("tensor product satisfies Property B", msg));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::build_from_presentation;
    use crate::testutil::pres;

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
        build_from_presentation(&pres(&[("u", 2)], &[&rel], &[], 2 * n + 2))
            .unwrap()
            .algebra()
            .clone()
    }

    fn sphere3() -> GradedAlgebra {
        build_from_presentation(&pres(&[("v", 3)], &[], &[], 3))
            .unwrap()
            .algebra()
            .clone()
    }

    #[test]
    fn sphere3_has_a_full_contraction() {
        let h = sphere3();
        let space = derivation_space(&h, -3, false).unwrap();
        assert_eq!(space.basis.len(), 1);
        assert!(space.exact);
        // theta(v) spans degree 0
        let v_id = h.basis().ids_of_degree(3)[0];
        let img = space.basis[0].apply(h.basis(), &Element::basis(v_id)).unwrap();
        assert!(!img.is_zero());
    }

    #[test]
    fn sphere2_truncated_square_kills_the_candidate() {
        let h = cpn(1); // Q[u]/u^2 within truncation
        let space = derivation_space(&h, -2, false).unwrap();
        assert!(space.exact);
        assert!(space.basis.is_empty(), "2c u = 0 forces c = 0");
    }

    #[test]
    fn torus_contractions_in_degree_minus_one() {
        let h = torus(2);
        let space = derivation_space(&h, -1, false).unwrap();
        assert_eq!(space.basis.len(), 2);
        // with the degree-1 constraint the space collapses
        let constrained = derivation_space(&h, -1, true).unwrap();
        assert!(constrained.basis.is_empty());
    }

    #[test]
    fn derivations_kill_the_unit() {
        let h = torus(3);
        for m in 1..=3i64 {
            for theta in derivation_space(&h, -m, false).unwrap().basis {
                let img = theta.apply(h.basis(), &h.unit()).unwrap();
                assert!(img.is_zero());
            }
        }
    }

    #[test]
    fn property_b_verdicts_match_the_classics() {
        for r in 1..=4 {
            assert!(property_b_check(&torus(r)).unwrap().passed(), "T^{r}");
        }
        for n in 1..=4 {
            assert!(property_b_check(&cpn(n)).unwrap().passed(), "CP^{n}");
        }
        let outcome = property_b_check(&sphere3()).unwrap();
        assert!(!outcome.passed());
        let w = outcome.witness.expect("failing scan carries a witness");
        assert_eq!(w.k, -3);
        assert!(!w.is_zero());
    }

    #[test]
    fn degree_below_the_top_is_always_zero() {
        let h = cpn(2);
        let space = derivation_space(&h, -7, true).unwrap();
        assert!(space.basis.is_empty());
    }

    #[test]
    fn nonnegative_degree_is_rejected() {
        let h = torus(2);
        assert!(matches!(
            derivation_space(&h, 0, false),
            Err(AlgebraError::DerivationDegreeNotNegative(0))
        ));
    }

    #[test]
    fn tensor_probe_agrees_with_the_closure_theorem() {
        let probe = tensor_property_b_probe(&cpn(1), &torus(1)).unwrap();
        assert!(probe.passed());
        let probe = tensor_property_b_probe(&cpn(1), &cpn(2)).unwrap();
        assert!(probe.passed());
        let probe = tensor_property_b_probe(&torus(2), &torus(3)).unwrap();
        assert!(probe.passed());
    }

    #[test]
    fn tensor_probe_reports_failing_preconditions() {
        let probe = tensor_property_b_probe(&sphere3(), &torus(1)).unwrap();
        assert!(!probe.passed());
    }
}
