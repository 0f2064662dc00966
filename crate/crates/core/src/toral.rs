//! Cohomological torus certificates and toral-rank bounds.
//!
//! A cohomological `r`-torus inside `H` is a set of `r` degree-1 classes
//! whose product is nonzero; such a set generates a `2^r`-dimensional
//! exterior subalgebra and certifies `dim H >= 2^r`, the inequality of
//! the toral rank conjecture.

use crate::cohomology::GroupActionSpec;
use crate::error::Result;
use crate::graded::{Element, GradedAlgebra};
use crate::linalg::SparseEliminator;
use crate::report::{Check, Report};
use crate::scalar::Rat;

/// Witness data for a cohomological `r`-torus.
#[derive(Debug, Clone)]
pub struct TorusCertificate {
    pub r: usize,
    /// degree-1 classes with nonzero product
    pub witnesses: Vec<Element>,
    /// the nonzero product of all witnesses (the unit when `r = 0`)
    pub product_class: Element,
}

impl TorusCertificate {
    /// Dimension of the subalgebra generated by the witnesses, computed
    /// by explicit span of all subset products. A valid certificate
    /// yields exactly `2^r`.
    pub fn span_dimension(&self, h: &GradedAlgebra) -> Result<usize> {
        let mut elim = SparseEliminator::new();
        let mut count = 0usize;
        for mask in 0u32..(1u32 << self.r) {
            let mut prod = h.unit();
            for (i, w) in self.witnesses.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = h.multiply(&prod, w)?;
                }
            }
            // subset products are homogeneous, so basis ids are already
            // degree-disjoint coordinates
            let row: Vec<(usize, Rat)> = prod.terms().map(|(id, c)| (id, c.clone())).collect();
            if !row.is_empty() && elim.insert(row) {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// Finds the largest `k` for which the multiplication map
/// `Lambda^k H^1 -> H^k` is nonzero, together with an explicit
/// decomposable witness.
///
/// Products of `k`-subsets of a degree-1 basis span the image of
/// `Lambda^k H^1`, so a descending scan over subsets is exhaustive.
pub fn max_exterior_rank(h: &GradedAlgebra) -> Result<TorusCertificate> {
    let basis = h.basis();
    let ones: Vec<usize> = basis.ids_of_degree(1).to_vec();
    let max_k = ones.len().min(basis.top_degree());
    for k in (1..=max_k).rev() {
        if let Some((subset, prod)) = first_nonzero_subset_product(h, &ones, k)? {
            return Ok(TorusCertificate {
                r: k,
                witnesses: subset.into_iter().map(Element::basis).collect(),
                product_class: prod,
            });
        }
    }
    Ok(TorusCertificate {
        r: 0,
        witnesses: Vec::new(),
        product_class: h.unit(),
    })
}

/// Lexicographically first `k`-subset of `ones` with nonzero product.
fn first_nonzero_subset_product(
    h: &GradedAlgebra,
    ones: &[usize],
    k: usize,
) -> Result<Option<(Vec<usize>, Element)>> {
    let n = ones.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut prod = h.unit();
        for &i in &idx {
            prod = h.multiply(&prod, &Element::basis(ones[i]))?;
            if prod.is_zero() && !prod.is_truncated() {
                break;
            }
        }
        if !prod.is_zero() {
            return Ok(Some((idx.iter().map(|&i| ones[i]).collect(), prod)));
        }
        // advance the combination
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if idx[pos] + 1 <= n - (k - pos) {
                idx[pos] += 1;
                for later in pos + 1..k {
                    idx[later] = idx[later - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of algebraically independent invariant degree-1 classes: the
/// exterior rank of the invariant subalgebra.
pub fn alpha_tilde_1(h_k: &GradedAlgebra, action: &GroupActionSpec) -> Result<usize> {
    let inv = crate::cohomology::invariant_subalgebra(h_k, action)?;
    Ok(max_exterior_rank(&inv.algebra)?.r)
}

/// The upper bound `alpha_tilde_1 + 1` on the toral rank of the
/// associated mapping-torus manifold.
pub fn toral_rank_bound(h_k: &GradedAlgebra, action: &GroupActionSpec) -> Result<usize> {
    Ok(alpha_tilde_1(h_k, action)? + 1)
}

/// Certifies the toral-rank inequality `dim H >= 2^r` and reports the
/// slack. The certificate is a proof object, so the inequality always
/// holds once the witness subalgebra checks out.
pub fn trc_check(h: &GradedAlgebra) -> Result<(Report, TorusCertificate)> {
    let cert = max_exterior_rank(h)?;
    let mut report = Report::new();
    let span = cert.span_dimension(h)?;
    if span == 1usize << cert.r {
        report.push(Check::pass(format!(
            "witnesses generate a 2^{} dimensional exterior subalgebra",
            cert.r
        )));
    } else {
        report.push(Check::fail(
            format!(
                "witnesses generate a 2^{} dimensional exterior subalgebra",
                cert.r
            ),
            format!("span dimension {span}"),
        ));
    }
    let total = h.total_dimension();
    let bound = 1usize << cert.r;
    if total >= bound {
        report.push(Check::pass(format!(
            "dim H = {total} >= 2^{} = {bound} (slack {})",
            cert.r,
            total - bound
        )));
    } else {
        report.push(Check::fail(
            format!("dim H >= 2^{}", cert.r),
            format!("{total} < {bound}"),
        ));
    }
    Ok((report, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cokahler_model::mapping_torus_algebra;
    use crate::presentation::build_from_presentation;
    use crate::testutil::{fe, pres};

    fn torus(r: usize) -> GradedAlgebra {
        let names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
        let gens: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
        build_from_presentation(&pres(&gens, &[], &[], r))
            .unwrap()
            .algebra()
            .clone()
    }

    #[test]
    fn full_torus_certificate_is_tight() {
        for r in 1..=5 {
            let h = torus(r);
            let cert = max_exterior_rank(&h).unwrap();
            assert_eq!(cert.r, r);
            let (report, cert) = trc_check(&h).unwrap();
            assert!(report.passed());
            assert_eq!(h.total_dimension(), 1 << cert.r, "slack 0 on T^{r}");
        }
    }

    #[test]
    fn cp2_has_no_torus() {
        let h = build_from_presentation(&pres(&[("u", 2)], &[&["u", "u", "u"]], &[], 6))
            .unwrap()
            .algebra()
            .clone();
        let cert = max_exterior_rank(&h).unwrap();
        assert_eq!(cert.r, 0);
        assert!(cert.witnesses.is_empty());
        assert!(trc_check(&h).unwrap().0.passed());
    }

    #[test]
    fn rotation_mapping_torus_rank_is_the_circle() {
        let p = pres(&[("x", 1), ("y", 1)], &[], &[], 2);
        let built = build_from_presentation(&p).unwrap();
        let images = vec![
            fe(&built.presentation, &[(1, &["y"])]),
            fe(&built.presentation, &[(-1, &["x"])]),
        ];
        let g = built.map_from_generator_images(&images).unwrap();
        let action = GroupActionSpec::new(4, g).unwrap();
        assert_eq!(alpha_tilde_1(built.algebra(), &action).unwrap(), 0);
        assert_eq!(toral_rank_bound(built.algebra(), &action).unwrap(), 1);

        let omega = built
            .reduce(&fe(&built.presentation, &[(1, &["x", "y"])]))
            .unwrap();
        let model = mapping_torus_algebra(built.algebra(), &action, &omega).unwrap();
        let cert = max_exterior_rank(&model.algebra).unwrap();
        assert_eq!(cert.r, 1);
        // the only degree-1 class is the circle class
        assert_eq!(cert.witnesses, vec![model.eta_element()]);
    }

    #[test]
    fn trivial_action_bound_counts_every_class() {
        let h = torus(2);
        let action = GroupActionSpec::trivial(h.basis());
        assert_eq!(alpha_tilde_1(&h, &action).unwrap(), 2);
        assert_eq!(toral_rank_bound(&h, &action).unwrap(), 3);
    }

    #[test]
    fn swap_action_on_cp1_cp1_has_rank_bound_one() {
        let p = pres(&[("a", 2), ("b", 2)], &[&["a", "a"], &["b", "b"]], &[], 4);
        let built = build_from_presentation(&p).unwrap();
        let images = vec![
            fe(&built.presentation, &[(1, &["b"])]),
            fe(&built.presentation, &[(1, &["a"])]),
        ];
        let g = built.map_from_generator_images(&images).unwrap();
        let action = GroupActionSpec::new(2, g).unwrap();
        assert_eq!(toral_rank_bound(built.algebra(), &action).unwrap(), 1);
    }

    #[test]
    fn partial_torus_inside_a_bigger_algebra() {
        // T^2 x CP^1: degree-1 classes give r = 2 with positive slack
        let t2 = torus(2);
        let cp1 = build_from_presentation(&pres(&[("u", 2)], &[&["u", "u"]], &[], 4))
            .unwrap()
            .algebra()
            .clone();
        let h = crate::graded::tensor_product(&t2, &cp1, None);
        let cert = max_exterior_rank(&h).unwrap();
        assert_eq!(cert.r, 2);
        let (report, _) = trc_check(&h).unwrap();
        assert!(report.passed());
        assert_eq!(h.total_dimension(), 8); // 4 x 2, slack 4
    }
}
