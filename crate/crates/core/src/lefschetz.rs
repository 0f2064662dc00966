//! Hard Lefschetz verification for cohomology rings.
//!
//! A Poincare-duality algebra of top degree `2n` with a degree-2 class
//! `omega` is *cohomologically Kahlerian* when multiplication by
//! `omega^{n-p}` is an isomorphism `H^p -> H^{2n-p}` for every
//! `0 <= p <= n`. The checks here build those matrices explicitly and
//! report rank defects with witnesses.

use crate::cohomology::{invariant_subalgebra, GroupActionSpec, InvariantSubalgebra};
use crate::error::{AlgebraError, Result};
use crate::graded::{Element, GradedAlgebra};
use crate::linalg::Matrix;
use crate::report::{Check, Report};

/// One Lefschetz map `L^{n-p}: H^p -> H^{2n-p}` (or its co-Kahler
/// analogue into degree `2n+1-p`).
#[derive(Debug, Clone)]
pub struct LefschetzEntry {
    pub p: usize,
    pub matrix: Matrix,
    pub rank: usize,
    pub iso: bool,
    pub truncated: bool,
}

/// All Lefschetz maps for a fixed `omega` and half-dimension `n`.
#[derive(Debug, Clone)]
pub struct LefschetzReport {
    pub n: usize,
    pub entries: Vec<LefschetzEntry>,
    pub report: Report,
}

impl LefschetzReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn entry_check(label: String, e: &LefschetzEntry) -> Check {
    if e.truncated {
        Check::inconclusive(label, "products above truncation")
    } else if e.iso {
        Check::pass(label)
    } else {
        Check::fail(
            label,
            format!(
                "rank {} of a {}x{} matrix",
                e.rank, e.matrix.rows, e.matrix.cols
            ),
        )
    }
}

/// Checks that multiplication by `omega^{n-p}` is bijective
/// `H^p -> H^{2n-p}` for every `0 <= p <= n`.
pub fn hard_lefschetz_check(
    h: &GradedAlgebra,
    omega: &Element,
    n: usize,
) -> Result<LefschetzReport> {
    if omega.homogeneous_degree(h.basis()) != Some(2) {
        return Err(AlgebraError::WrongClassDegree {
            label: omega.render(h.basis()),
            expected: 2,
        });
    }
    let mut entries = Vec::new();
    let mut report = Report::new();
    for p in 0..=n {
        let k = n - p;
        let power = h.power(omega, k)?;
        let (matrix, mut truncated) = h.multiplication_matrix(&power, 2 * k, p)?;
        truncated |= power.is_truncated();
        let rank = matrix.rank();
        let iso = matrix.rows == matrix.cols && rank == matrix.rows;
        let entry = LefschetzEntry {
            p,
            matrix,
            rank,
            iso,
            truncated,
        };
        report.push(entry_check(
            format!("L^{k}: H^{p} -> H^{}", 2 * n - p),
            &entry,
        ));
        entries.push(entry);
    }
    Ok(LefschetzReport { n, entries, report })
}

/// Verifies that `omega` is fixed by the action, passes to the invariant
/// subalgebra and runs the hard Lefschetz check there.
///
/// Returns the invariant subalgebra alongside the report so callers can
/// keep building on it.
pub fn invariant_kahler_check(
    h_k: &GradedAlgebra,
    action: &GroupActionSpec,
    omega: &Element,
    n: usize,
) -> Result<(LefschetzReport, InvariantSubalgebra)> {
    let basis = h_k.basis();
    if omega.homogeneous_degree(basis) != Some(2) {
        return Err(AlgebraError::WrongClassDegree {
            label: omega.render(basis),
            expected: 2,
        });
    }
    let image = action.generator.apply(basis, basis, omega)?;
    if &image != omega {
        return Err(AlgebraError::NotInvariant {
            label: omega.render(basis),
        });
    }
    let inv = invariant_subalgebra(h_k, action)?;
    let omega_inv = inv.restrict(basis, omega)?;
    let report = hard_lefschetz_check(&inv.algebra, &omega_inv, n)?;
    Ok((report, inv))
}
