//! Cohomology rings of cdgas and invariant subalgebras under finite
//! cyclic actions.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::graded::{AlgebraMap, ChainComplexAlgebra, Element, GradedAlgebra, GradedBasis};
use crate::linalg::{independent_subset, span_basis, Matrix};
use crate::report::{Check, Report};
use crate::scalar::{zero, Rat};

/// Cohomology ring of a cdga, with a chosen cocycle representative for
/// every class.
#[derive(Debug, Clone)]
pub struct CohomologyRing {
    pub algebra: GradedAlgebra,
    /// representative cocycle in the source cdga, indexed by class id
    pub representatives: Vec<Element>,
    /// per degree: a basis of the image of d (exact elements), kept to
    /// project arbitrary cocycles onto classes
    exact: Vec<Vec<Vec<Rat>>>,
    /// true when the top truncation degree could not be trusted (the
    /// differential out of it is not representable)
    pub unreliable_top: bool,
}

impl CohomologyRing {
    /// Expresses a cocycle of the source cdga as an element of the
    /// cohomology algebra.
    pub fn class_of(&self, source: &GradedBasis, z: &Element) -> Result<Element> {
        let Some(deg) = z.homogeneous_degree(source) else {
            if z.is_zero() {
                let mut e = Element::zero();
                if z.is_truncated() {
                    e.set_truncated();
                }
                return Ok(e);
            }
            return Err(AlgebraError::MalformedAlgebra(
                "class_of needs a homogeneous cocycle".into(),
            ));
        };
        let coords = z.coords_in_degree(source, deg)?;
        // solve [exact | representatives] x = z; class coords are the
        // representative block of the solution
        let exact = &self.exact[deg];
        let classes = self.algebra.basis().ids_of_degree(deg);
        let mut cols: Vec<Vec<Rat>> = exact.clone();
        for &cid in classes {
            cols.push(self.representatives[cid].coords_in_degree(source, deg)?);
        }
        let dim = source.dim(deg);
        let mut m = Matrix::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        let x = m.solve(&coords).ok_or_else(|| {
            AlgebraError::MalformedAlgebra("element is not a cocycle of the source cdga".into())
        })?;
        let class_coords = &x[exact.len()..];
        let mut e = Element::from_coords(self.algebra.basis(), deg, class_coords);
        if z.is_truncated() {
            e.set_truncated();
        }
        Ok(e)
    }

    /// True iff the cocycle is a coboundary.
    pub fn is_exact(&self, source: &GradedBasis, z: &Element) -> Result<bool> {
        Ok(self.class_of(source, z)?.is_zero())
    }
}

/// Computes the cohomology ring of a cdga.
///
/// Class representatives are chosen from a deterministic row-reduced
/// basis; the induced product is computed on representatives and
/// projected back, which fails loudly if a representative product were
/// not a cocycle.
pub fn cohomology(c: &ChainComplexAlgebra) -> Result<CohomologyRing> {
    let basis = c.basis();
    let trunc = basis.truncation();
    let complete = basis.is_complete();

    let mut class_reps: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(trunc + 1);
    let mut exact: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(trunc + 1);
    for p in 0..=trunc {
        let dim = basis.dim(p);
        let ker: Vec<Vec<Rat>> = if p == trunc && !complete {
            // d out of the top degree is not representable: take everything
            (0..dim)
                .map(|i| {
                    let mut v = vec![zero(); dim];
                    v[i] = crate::scalar::one();
                    v
                })
                .collect()
        } else {
            c.d_matrix(p).kernel_basis()
        };
        let im: Vec<Vec<Rat>> = if p == 0 {
            Vec::new()
        } else {
            let d_prev = c.d_matrix(p - 1);
            let cols: Vec<Vec<Rat>> = (0..d_prev.cols).map(|j| d_prev.col(j)).collect();
            span_basis(&cols, dim)
        };
        // extend the image basis to a kernel basis; the extension vectors
        // are the class representatives
        let mut pool = im.clone();
        pool.extend(ker.iter().cloned());
        let chosen = independent_subset(&pool);
        let reps: Vec<Vec<Rat>> = chosen
            .into_iter()
            .filter(|&i| i >= im.len())
            .map(|i| pool[i].clone())
            .collect();
        class_reps.push(reps);
        exact.push(im);
    }

    // build the cohomology basis
    let mut elements = Vec::new();
    let mut representatives = Vec::new();
    for (p, reps) in class_reps.iter().enumerate() {
        for (i, r) in reps.iter().enumerate() {
            let name = if p == 0 {
                "1".to_string()
            } else {
                format!("h{p}_{i}")
            };
            elements.push((name, p));
            representatives.push(Element::from_coords(basis, p, r));
        }
    }
    let h_basis = GradedBasis::new(elements, trunc, complete)?;
    if h_basis.dim(0) != 1 {
        return Err(AlgebraError::MalformedAlgebra(
            "H^0 is not one-dimensional".into(),
        ));
    }

    let mut ring = CohomologyRing {
        algebra: GradedAlgebra::new(h_basis.clone(), BTreeMap::new()),
        representatives,
        exact,
        unreliable_top: !complete && !c.is_zero_differential(),
    };

    // induced products via representatives
    let mut products = BTreeMap::new();
    for i in h_basis.ids() {
        let di = h_basis.degree(i);
        if di == 0 {
            continue;
        }
        for j in h_basis.ids() {
            let dj = h_basis.degree(j);
            if dj == 0 || di + dj > trunc {
                continue;
            }
            let z = c
                .algebra
                .multiply(&ring.representatives[i], &ring.representatives[j])?;
            let cls = ring.class_of(basis, &z)?;
            products.insert((i, j), cls);
        }
    }
    ring.algebra = GradedAlgebra::new(h_basis, products);
    Ok(ring)
}

/// Degreewise dimensions, length `D + 1`.
pub fn betti_numbers(h: &GradedAlgebra) -> Vec<usize> {
    h.betti_numbers()
}

/// A finite-order algebra automorphism generating a cyclic group `Z_m`.
#[derive(Debug, Clone)]
pub struct GroupActionSpec {
    pub order: usize,
    pub generator: AlgebraMap,
}

impl GroupActionSpec {
    pub fn new(order: usize, generator: AlgebraMap) -> Result<Self> {
        if order == 0 {
            return Err(AlgebraError::ZeroOrder);
        }
        Ok(GroupActionSpec { order, generator })
    }

    pub fn trivial(basis: &GradedBasis) -> Self {
        GroupActionSpec {
            order: 1,
            generator: AlgebraMap::identity(basis),
        }
    }

    /// Checks that the generator respects products, has exactly the
    /// stated order on every basis element, and commutes with `d` when a
    /// differential is supplied.
    pub fn validate(&self, h: &GradedAlgebra, diff: Option<&ChainComplexAlgebra>) -> Result<()> {
        let basis = h.basis();
        // order
        let mut power = self.generator.clone();
        for _ in 1..self.order {
            power = self.generator.compose(&power);
        }
        if !power.is_identity() {
            let witness = basis
                .ids()
                .find(|&id| {
                    let e = Element::basis(id);
                    power.apply(basis, basis, &e).map(|img| img != e).unwrap_or(true)
                })
                .map(|id| basis.name(id).to_string())
                .unwrap_or_else(|| "?".into());
            return Err(AlgebraError::WrongOrder {
                order: self.order,
                witness,
            });
        }
        // the stated order must be the exact period, not just a multiple
        let mut power = AlgebraMap::identity(basis);
        for k in 1..self.order {
            power = self.generator.compose(&power);
            if self.order % k == 0 && power.is_identity() {
                return Err(AlgebraError::WrongOrder {
                    order: self.order,
                    witness: format!("the automorphism already has order {k}"),
                });
            }
        }
        // multiplicative
        for i in basis.ids() {
            for j in basis.ids() {
                if basis.degree(i) + basis.degree(j) > basis.truncation() {
                    continue;
                }
                let gi = self.generator.apply(basis, basis, &Element::basis(i))?;
                let gj = self.generator.apply(basis, basis, &Element::basis(j))?;
                let lhs = self
                    .generator
                    .apply_any(basis, basis, &h.basis_product(i, j))?;
                let rhs = h.multiply(&gi, &gj)?;
                if lhs != rhs {
                    return Err(AlgebraError::NotMultiplicative {
                        a: basis.name(i).to_string(),
                        b: basis.name(j).to_string(),
                    });
                }
            }
        }
        // chain map
        if let Some(c) = diff {
            for id in basis.ids() {
                if basis.degree(id) + 1 > basis.truncation() {
                    continue;
                }
                let lhs = self.generator.apply_any(basis, basis, c.d_basis(id))?;
                let rhs = c.d(&self.generator.apply(basis, basis, &Element::basis(id))?);
                if lhs != rhs {
                    return Err(AlgebraError::NotChainMap {
                        witness: basis.name(id).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Matrix of the Reynolds averaging projector `(1/m) sum g^i` in
    /// degree `p`.
    pub fn averaging_matrix(&self, basis: &GradedBasis, p: usize) -> Matrix {
        let dim = basis.dim(p);
        let mut acc = Matrix::zeros(dim, dim);
        let mut power = Matrix::identity(dim);
        let g = self
            .generator
            .matrix(p)
            .cloned()
            .unwrap_or_else(|| Matrix::identity(dim));
        for _ in 0..self.order {
            acc = acc.add(&power);
            power = g.mul(&power);
        }
        let m_inv = crate::scalar::frac(1, self.order as i64);
        acc.scale(&m_inv)
    }
}

/// Pushes an action on the source cdga forward to its cohomology ring.
pub fn induce_on_cohomology(
    action: &GroupActionSpec,
    source: &ChainComplexAlgebra,
    ring: &CohomologyRing,
) -> Result<GroupActionSpec> {
    let h_basis = ring.algebra.basis();
    let mut matrices = Vec::with_capacity(h_basis.truncation() + 1);
    for p in 0..=h_basis.truncation() {
        let classes = h_basis.ids_of_degree(p);
        let mut m = Matrix::zeros(h_basis.dim(p), classes.len());
        for (col, &cid) in classes.iter().enumerate() {
            let img = action
                .generator
                .apply(source.basis(), source.basis(), &ring.representatives[cid])?;
            let cls = ring.class_of(source.basis(), &img)?;
            let coords = cls.coords_in_degree(h_basis, p)?;
            for (row, v) in coords.into_iter().enumerate() {
                m.set(row, col, v);
            }
        }
        matrices.push(m);
    }
    GroupActionSpec::new(action.order, AlgebraMap::new(matrices))
}

/// Result of [`invariant_subalgebra`]: the fixed subalgebra and its
/// inclusion into the ambient algebra.
#[derive(Debug, Clone)]
pub struct InvariantSubalgebra {
    pub algebra: GradedAlgebra,
    pub inclusion: AlgebraMap,
}

impl InvariantSubalgebra {
    /// The ambient-algebra element underlying an invariant element.
    pub fn include(&self, ambient: &GradedBasis, x: &Element) -> Result<Element> {
        self.inclusion.apply_any(self.algebra.basis(), ambient, x)
    }

    /// Expresses an ambient invariant element in the invariant basis.
    pub fn restrict(&self, ambient: &GradedBasis, x: &Element) -> Result<Element> {
        let Some(deg) = x.homogeneous_degree(ambient) else {
            if x.is_zero() {
                return Ok(Element::zero());
            }
            return Err(AlgebraError::MalformedAlgebra(
                "restrict needs a homogeneous element".into(),
            ));
        };
        let coords = x.coords_in_degree(ambient, deg)?;
        let m = self.inclusion.matrix(deg).expect("degree within range");
        let sol = m.solve(&coords).ok_or_else(|| AlgebraError::NotInvariant {
            label: x.render(ambient),
        })?;
        let mut e = Element::from_coords(self.algebra.basis(), deg, &sol);
        if x.is_truncated() {
            e.set_truncated();
        }
        Ok(e)
    }
}

/// Computes the fixed subalgebra of a finite cyclic action as the image
/// of the Reynolds averaging projector `(1/m) sum_{i<m} g^i`.
///
/// In debug builds the projector image is cross-checked against the fixed
/// space `ker(g - id)`; in characteristic zero the two must agree.
pub fn invariant_subalgebra(
    h: &GradedAlgebra,
    action: &GroupActionSpec,
) -> Result<InvariantSubalgebra> {
    let basis = h.basis();
    action.validate(h, None)?;

    let mut inv_vectors: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(basis.truncation() + 1);
    for p in 0..=basis.truncation() {
        let proj = action.averaging_matrix(basis, p);
        let dim = basis.dim(p);
        let cols: Vec<Vec<Rat>> = (0..dim).map(|j| proj.col(j)).collect();
        let image = span_basis(&cols, dim);
        debug_assert!(
            {
                // idempotence and agreement with the fixed space
                let g = action
                    .generator
                    .matrix(p)
                    .cloned()
                    .unwrap_or_else(|| Matrix::identity(dim));
                let fixed_dim = dim - g.add(&Matrix::identity(dim).scale(&crate::scalar::int(-1))).rank();
                proj.mul(&proj) == proj && image.len() == fixed_dim
            },
            "Reynolds projector disagrees with the fixed space in degree {p}"
        );
        inv_vectors.push(image);
    }

    let mut elements = Vec::new();
    let mut carriers: Vec<Element> = Vec::new();
    for (p, vecs) in inv_vectors.iter().enumerate() {
        for (i, v) in vecs.iter().enumerate() {
            let name = if p == 0 {
                "1".to_string()
            } else {
                format!("inv{p}_{i}")
            };
            elements.push((name, p));
            carriers.push(Element::from_coords(basis, p, v));
        }
    }
    let inv_basis = GradedBasis::new(elements, basis.truncation(), basis.is_complete())?;

    let mut matrices = Vec::with_capacity(basis.truncation() + 1);
    for p in 0..=basis.truncation() {
        let ids = inv_basis.ids_of_degree(p);
        let mut m = Matrix::zeros(basis.dim(p), ids.len());
        for (col, &iid) in ids.iter().enumerate() {
            let coords = carriers[iid].coords_in_degree(basis, p)?;
            for (row, v) in coords.into_iter().enumerate() {
                m.set(row, col, v);
            }
        }
        matrices.push(m);
    }
    let inclusion = AlgebraMap::new(matrices);
    let sub = InvariantSubalgebra {
        algebra: GradedAlgebra::new(inv_basis.clone(), BTreeMap::new()),
        inclusion,
    };

    // products: multiply carriers upstairs, restrict back
    let mut products = BTreeMap::new();
    for i in inv_basis.ids() {
        let di = inv_basis.degree(i);
        if di == 0 {
            continue;
        }
        for j in inv_basis.ids() {
            let dj = inv_basis.degree(j);
            if dj == 0 || di + dj > inv_basis.truncation() {
                continue;
            }
            let prod = h.multiply(&carriers[i], &carriers[j])?;
            let restricted = sub.restrict(basis, &prod)?;
            products.insert((i, j), restricted);
        }
    }
    Ok(InvariantSubalgebra {
        algebra: GradedAlgebra::new(inv_basis, products),
        inclusion: sub.inclusion,
    })
}

/// Checks that the pairing `H^p x H^{n_top - p} -> H^{n_top}` is a
/// perfect pairing in every degree.
pub fn poincare_duality_check(h: &GradedAlgebra, n_top: usize) -> Result<Report> {
    let basis = h.basis();
    if basis.dim(n_top) != 1 {
        return Err(AlgebraError::TopNotLine {
            top: n_top,
            dim: basis.dim(n_top),
        });
    }
    let top_id = basis.ids_of_degree(n_top)[0];
    let mut report = Report::new();
    for p in 0..=n_top / 2 {
        let q = n_top - p;
        let left = basis.ids_of_degree(p);
        let right = basis.ids_of_degree(q);
        if left.len() != right.len() {
            report.push(Check::fail(
                format!("pairing H^{p} x H^{q}"),
                format!("dims {} vs {}", left.len(), right.len()),
            ));
            continue;
        }
        let mut m = Matrix::zeros(left.len(), right.len());
        let mut truncated = false;
        for (i, &a) in left.iter().enumerate() {
            for (j, &b) in right.iter().enumerate() {
                let prod = h.basis_product(a, b);
                truncated |= prod.is_truncated();
                m.set(i, j, prod.coeff(top_id));
            }
        }
        let rank = m.rank();
        if truncated {
            report.push(Check::inconclusive(
                format!("pairing H^{p} x H^{q}"),
                "products above truncation".to_string(),
            ));
        } else if rank == left.len() {
            report.push(Check::pass(format!("pairing H^{p} x H^{q}")));
        } else {
            report.push(Check::fail(
                format!("pairing H^{p} x H^{q}"),
                format!("rank deficit {}", left.len() - rank),
            ));
        }
    }
    Ok(report)
}
