//! Axiom verification for graded algebras and cdgas.

use crate::graded::{ChainComplexAlgebra, Element, GradedAlgebra};
use crate::report::{Check, CheckStatus, Report};
use crate::scalar::koszul_sign;

/// Checks graded commutativity, associativity within truncation and the
/// unit law on every table pair/triple. Failures are report content, not
/// errors, and carry a witness.
pub fn verify_graded_algebra(a: &GradedAlgebra) -> Report {
    let mut report = Report::new();
    let basis = a.basis();
    let trunc = basis.truncation();

    let mut comm = Check::pass("graded commutativity");
    'comm: for i in basis.ids() {
        for j in basis.ids() {
            let (di, dj) = (basis.degree(i), basis.degree(j));
            if di + dj > trunc {
                continue;
            }
            let xy = a.basis_product(i, j);
            let yx = a.basis_product(j, i).scale(&koszul_sign(di, dj));
            if xy != yx {
                comm = Check::fail(
                    "graded commutativity",
                    format!("({}, {})", basis.name(i), basis.name(j)),
                );
                break 'comm;
            }
        }
    }
    report.push(comm);

    let mut unit = Check::pass("unit law");
    for i in basis.ids() {
        let e = Element::basis(i);
        let left = a.multiply(&a.unit(), &e);
        let right = a.multiply(&e, &a.unit());
        if left.as_ref().ok() != Some(&e) || right.as_ref().ok() != Some(&e) {
            unit = Check::fail("unit law", basis.name(i).to_string());
            break;
        }
    }
    report.push(unit);

    let mut assoc = Check::pass("associativity");
    'assoc: for i in basis.ids() {
        for j in basis.ids() {
            for k in basis.ids() {
                let total = basis.degree(i) + basis.degree(j) + basis.degree(k);
                if total > trunc {
                    continue;
                }
                let xy = a.basis_product(i, j);
                let yz = a.basis_product(j, k);
                let lhs = a.multiply(&xy, &Element::basis(k));
                let rhs = a.multiply(&Element::basis(i), &yz);
                if lhs.ok() != rhs.ok() {
                    assoc = Check::fail(
                        "associativity",
                        format!(
                            "({}, {}, {})",
                            basis.name(i),
                            basis.name(j),
                            basis.name(k)
                        ),
                    );
                    break 'assoc;
                }
            }
        }
    }
    report.push(assoc);
    report
}

/// [`verify_graded_algebra`] plus `d^2 = 0` and the Leibniz rule.
pub fn verify_cdga(c: &ChainComplexAlgebra) -> Report {
    let mut report = verify_graded_algebra(&c.algebra);
    let basis = c.basis();
    let trunc = basis.truncation();

    let mut dd = Check::pass("d^2 = 0");
    for id in basis.ids() {
        // d at the top degree is not representable; nothing to check there
        if basis.degree(id) + 2 > trunc {
            continue;
        }
        if !c.d(c.d_basis(id)).is_zero() {
            dd = Check::fail("d^2 = 0", basis.name(id).to_string());
            break;
        }
    }
    report.push(dd);

    let mut leibniz = Check::pass("Leibniz rule");
    'leib: for i in basis.ids() {
        for j in basis.ids() {
            let (di, dj) = (basis.degree(i), basis.degree(j));
            // both sides must stay strictly inside the truncation
            if di + dj + 1 > trunc {
                continue;
            }
            let prod = c.algebra.basis_product(i, j);
            let lhs = c.d(&prod);
            let t1 = c
                .algebra
                .multiply(c.d_basis(i), &Element::basis(j))
                .unwrap_or_else(|_| Element::zero());
            let t2 = c
                .algebra
                .multiply(&Element::basis(i), c.d_basis(j))
                .unwrap_or_else(|_| Element::zero())
                .scale(&crate::scalar::sign_pow(di as i64));
            if lhs != t1.add(&t2) {
                leibniz = Check::fail(
                    "Leibniz rule",
                    format!("({}, {})", basis.name(i), basis.name(j)),
                );
                break 'leib;
            }
        }
    }
    report.push(leibniz);
    report
}

/// Convenience: true when every axiom passes.
pub fn cdga_is_valid(c: &ChainComplexAlgebra) -> bool {
    verify_cdga(c).verdict() == CheckStatus::Pass
}
