//! Graded bases, sparse elements and multiplication tables.
//!
//! A [`GradedAlgebra`] is a finite graded-commutative algebra over `Q`
//! given by an explicit basis per degree and a Koszul-signed product
//! table. Everything above the truncation degree `D` is dropped; if the
//! algebra is marked *complete*, degrees above `D` are known to be
//! genuinely zero and dropping loses nothing, otherwise dropped products
//! carry a truncation flag that downstream checks turn into
//! "inconclusive" verdicts.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::linalg::Matrix;
use crate::scalar::{koszul_sign, zero, Rat};
use num_traits::Zero;

/// Ordered basis of a graded vector space, truncated at degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<usize>,
    by_degree: Vec<Vec<usize>>,
    truncation: usize,
    complete: bool,
}

impl GradedBasis {
    /// Builds a basis from `(name, degree)` pairs. The unit must be the
    /// single degree-0 element and is always basis id 0.
    pub fn new(elements: Vec<(String, usize)>, truncation: usize, complete: bool) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut by_degree = vec![Vec::new(); truncation + 1];
        let mut seen = std::collections::BTreeSet::new();
        for (name, deg) in elements {
            if !seen.insert(name.clone()) {
                return Err(AlgebraError::DuplicateGenerator(name));
            }
            if deg > truncation {
                return Err(AlgebraError::MalformedAlgebra(format!(
                    "basis element `{name}` of degree {deg} exceeds truncation {truncation}"
                )));
            }
            let id = names.len();
            by_degree[deg].push(id);
            names.push(name);
            degrees.push(deg);
        }
        if by_degree[0].len() != 1 || degrees.first() != Some(&0) {
            return Err(AlgebraError::MalformedAlgebra(
                "degree 0 must be one-dimensional, spanned by the unit at id 0".into(),
            ));
        }
        Ok(GradedBasis {
            names,
            degrees,
            by_degree,
            truncation,
            complete,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// True when the algebra is known to vanish above the truncation degree.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.degrees[id]
    }

    pub fn ids_of_degree(&self, deg: usize) -> &[usize] {
        if deg > self.truncation {
            &[]
        } else {
            &self.by_degree[deg]
        }
    }

    pub fn dim(&self, deg: usize) -> usize {
        self.ids_of_degree(deg).len()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.names.len()
    }

    /// Largest degree with a nonzero dimension.
    pub fn top_degree(&self) -> usize {
        (0..=self.truncation)
            .rev()
            .find(|&d| self.dim(d) > 0)
            .unwrap_or(0)
    }

    /// Position of `id` within its degree.
    pub fn index_in_degree(&self, id: usize) -> usize {
        self.ids_of_degree(self.degree(id))
            .iter()
            .position(|&x| x == id)
            .expect("id belongs to its degree slot")
    }

    pub fn id_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sparse linear combination of basis elements.
///
/// A dropped above-truncation product marks the element `truncated`; any
/// check consuming such an element must report itself inconclusive
/// rather than pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    coeffs: BTreeMap<usize, Rat>,
    truncated: bool,
}

impl Element {
    pub fn zero() -> Self {
        Element {
            coeffs: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn basis(id: usize) -> Self {
        Element::term(id, crate::scalar::one())
    }

    pub fn term(id: usize, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(id, coeff);
        }
        Element {
            coeffs,
            truncated: false,
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut e = Element::zero();
        for (id, c) in terms {
            e.add_term(id, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn set_truncated(&mut self) {
        self.truncated = true;
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.coeffs.iter().map(|(&id, c)| (id, c))
    }

    pub fn coeff(&self, id: usize) -> Rat {
        self.coeffs.get(&id).cloned().unwrap_or_else(zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add_term(&mut self, id: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(id).or_insert_with(zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&id);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (id, c) in other.terms() {
            out.add_term(id, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&crate::scalar::int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Element {
        if c.is_zero() {
            let mut z = Element::zero();
            z.truncated = self.truncated;
            return z;
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// The common degree of all terms, if the element is homogeneous.
    /// The zero element has no degree.
    pub fn homogeneous_degree(&self, basis: &GradedBasis) -> Option<usize> {
        let mut deg = None;
        for id in self.support() {
            let d = basis.degree(id);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Coordinates within a single degree slot; errors if not supported there.
    pub fn coords_in_degree(&self, basis: &GradedBasis, deg: usize) -> Result<Vec<Rat>> {
        let ids = basis.ids_of_degree(deg);
        let mut v = vec![zero(); ids.len()];
        for (id, c) in self.terms() {
            if basis.degree(id) != deg {
                return Err(AlgebraError::MixedDegrees {
                    name: basis.name(id).to_string(),
                    expected: deg,
                    found: basis.degree(id),
                });
            }
            let pos = basis.index_in_degree(id);
            v[pos] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coords(basis: &GradedBasis, deg: usize, coords: &[Rat]) -> Element {
        let ids = basis.ids_of_degree(deg);
        debug_assert_eq!(ids.len(), coords.len());
        Element::from_terms(
            ids.iter()
                .zip(coords)
                .map(|(&id, c)| (id, c.clone()))
                .filter(|(_, c)| !c.is_zero()),
        )
    }

    /// Human-readable rendering against a basis, deterministic term order.
    pub fn render(&self, basis: &GradedBasis) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (id, c)) in self.terms().enumerate() {
            let cs = crate::scalar::format_rat(c);
            let name = basis.name(id);
            if i > 0 {
                out.push_str(" + ");
            }
            if cs == "1" && id != 0 {
                out.push_str(name);
            } else if id == 0 {
                out.push_str(&cs);
            } else {
                out.push_str(&format!("{cs}*{name}"));
            }
        }
        out
    }
}

/// Finite graded-commutative algebra over `Q` with an explicit product table.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    basis: GradedBasis,
    /// product of basis pair (i, j), stored for all ordered pairs of
    /// positive-degree elements with degree sum <= D
    products: BTreeMap<(usize, usize), Element>,
}

impl GradedAlgebra {
    pub fn new(basis: GradedBasis, products: BTreeMap<(usize, usize), Element>) -> Self {
        GradedAlgebra { basis, products }
    }

    /// The one-dimensional algebra `Q` in degree 0.
    pub fn unit_algebra() -> Self {
        let basis = GradedBasis::new(vec![("1".into(), 0)], 0, true).expect("unit basis");
        GradedAlgebra {
            basis,
            products: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn truncation(&self) -> usize {
        self.basis.truncation()
    }

    pub fn unit(&self) -> Element {
        Element::basis(0)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.truncation()).map(|d| self.basis.dim(d)).collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.basis.len()
    }

    fn check_supported(&self, x: &Element) -> Result<()> {
        for id in x.support() {
            if id >= self.basis.len() {
                return Err(AlgebraError::ForeignBasisElement { id });
            }
        }
        Ok(())
    }

    /// Product of two basis elements. Above the truncation degree the
    /// result is zero; it is flagged truncated unless the algebra is
    /// complete there.
    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        if i == 0 {
            return Element::basis(j);
        }
        if j == 0 {
            return Element::basis(i);
        }
        let total = self.basis.degree(i) + self.basis.degree(j);
        if total > self.truncation() {
            let mut z = Element::zero();
            if !self.basis.is_complete() {
                z.set_truncated();
            }
            return z;
        }
        self.products
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Element::zero)
    }

    /// Bilinear extension of the product table.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_supported(x)?;
        self.check_supported(y)?;
        let mut out = Element::zero();
        if x.is_truncated() || y.is_truncated() {
            out.set_truncated();
        }
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let p = self.basis_product(i, j);
                if p.is_truncated() {
                    out.set_truncated();
                }
                let c = a * b;
                for (id, pc) in p.terms() {
                    out.add_term(id, &c * pc);
                }
            }
        }
        Ok(out)
    }

    /// `x^k` by iterated multiplication.
    pub fn power(&self, x: &Element, k: usize) -> Result<Element> {
        let mut out = self.unit();
        for _ in 0..k {
            out = self.multiply(&out, x)?;
        }
        Ok(out)
    }

    /// Matrix of left multiplication by `x` (homogeneous of degree `dx`)
    /// from degree `p` to degree `p + dx`, columns indexed by the degree-`p`
    /// basis. Returns the matrix and whether any entry was truncated.
    pub fn multiplication_matrix(&self, x: &Element, dx: usize, p: usize) -> Result<(Matrix, bool)> {
        let src = self.basis.ids_of_degree(p);
        let tgt_dim = self.basis.dim(p + dx);
        let mut m = Matrix::zeros(tgt_dim, src.len());
        let mut truncated = false;
        for (col, &id) in src.iter().enumerate() {
            let prod = self.multiply(x, &Element::basis(id))?;
            truncated |= prod.is_truncated();
            let coords = prod.coords_in_degree(&self.basis, p + dx)?;
            for (row, c) in coords.into_iter().enumerate() {
                m.set(row, col, c);
            }
        }
        Ok((m, truncated))
    }
}

/// Graded algebra plus a degree `+1` differential.
#[derive(Debug, Clone)]
pub struct ChainComplexAlgebra {
    pub algebra: GradedAlgebra,
    /// d of each basis element, indexed by basis id
    diff: Vec<Element>,
}

impl ChainComplexAlgebra {
    pub fn new(algebra: GradedAlgebra, diff: Vec<Element>) -> Self {
        debug_assert_eq!(diff.len(), algebra.basis().len());
        ChainComplexAlgebra { algebra, diff }
    }

    /// Wraps a graded algebra as a cdga with zero differential.
    pub fn with_zero_differential(algebra: GradedAlgebra) -> Self {
        let n = algebra.basis().len();
        ChainComplexAlgebra {
            algebra,
            diff: vec![Element::zero(); n],
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        self.algebra.basis()
    }

    pub fn d_basis(&self, id: usize) -> &Element {
        &self.diff[id]
    }

    pub fn d(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        if x.is_truncated() {
            out.set_truncated();
        }
        for (id, c) in x.terms() {
            for (tid, tc) in self.diff[id].terms() {
                out.add_term(tid, c * tc);
            }
        }
        out
    }

    /// Matrix of `d: degree p -> degree p+1`.
    pub fn d_matrix(&self, p: usize) -> Matrix {
        let basis = self.basis();
        let src = basis.ids_of_degree(p);
        let tgt_dim = if p + 1 > basis.truncation() {
            0
        } else {
            basis.dim(p + 1)
        };
        let mut m = Matrix::zeros(tgt_dim, src.len());
        for (col, &id) in src.iter().enumerate() {
            for (tid, c) in self.diff[id].terms() {
                let row = basis.index_in_degree(tid);
                m.set(row, col, c.clone());
            }
        }
        m
    }

    pub fn is_zero_differential(&self) -> bool {
        self.diff.iter().all(|e| e.is_zero())
    }
}

/// Degree-preserving linear map between graded bases, one matrix per degree.
#[derive(Debug, Clone)]
pub struct AlgebraMap {
    /// matrices[p]: coordinates in source degree p -> target degree p
    matrices: Vec<Matrix>,
}

impl AlgebraMap {
    pub fn new(matrices: Vec<Matrix>) -> Self {
        AlgebraMap { matrices }
    }

    pub fn identity(basis: &GradedBasis) -> Self {
        let matrices = (0..=basis.truncation())
            .map(|p| Matrix::identity(basis.dim(p)))
            .collect();
        AlgebraMap { matrices }
    }

    pub fn matrix(&self, p: usize) -> Option<&Matrix> {
        self.matrices.get(p)
    }

    pub fn degrees(&self) -> usize {
        self.matrices.len()
    }

    /// Applies the map to a homogeneous element of the source.
    pub fn apply(
        &self,
        source: &GradedBasis,
        target: &GradedBasis,
        x: &Element,
    ) -> Result<Element> {
        let Some(deg) = x.homogeneous_degree(source) else {
            if x.is_zero() {
                return Ok(Element::zero());
            }
            return Err(AlgebraError::MalformedAlgebra(
                "AlgebraMap::apply needs a homogeneous element".into(),
            ));
        };
        let coords = x.coords_in_degree(source, deg)?;
        let m = self.matrices.get(deg).ok_or_else(|| {
            AlgebraError::MalformedAlgebra(format!("map has no matrix in degree {deg}"))
        })?;
        let out = m.mul_vec(&coords);
        let mut e = Element::from_coords(target, deg, &out);
        if x.is_truncated() {
            e.set_truncated();
        }
        Ok(e)
    }

    /// Applies to a possibly inhomogeneous element by splitting into
    /// homogeneous parts.
    pub fn apply_any(
        &self,
        source: &GradedBasis,
        target: &GradedBasis,
        x: &Element,
    ) -> Result<Element> {
        let mut out = Element::zero();
        if x.is_truncated() {
            out.set_truncated();
        }
        let mut by_degree: BTreeMap<usize, Element> = BTreeMap::new();
        for (id, c) in x.terms() {
            by_degree
                .entry(source.degree(id))
                .or_insert_with(Element::zero)
                .add_term(id, c.clone());
        }
        for part in by_degree.values() {
            out = out.add(&self.apply(source, target, part)?);
        }
        Ok(out)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        let n = self.matrices.len().min(other.matrices.len());
        AlgebraMap {
            matrices: (0..n)
                .map(|p| self.matrices[p].mul(&other.matrices[p]))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrices
            .iter()
            .all(|m| m.rows == m.cols && *m == Matrix::identity(m.rows))
    }
}

/// Tensor product of graded algebras with the Koszul sign rule
/// `(a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'`.
///
/// The result is truncated at `min(D_A + D_B, cap)`; name collisions are
/// resolved by qualified `left(x)right` names.
pub fn tensor_product(a: &GradedAlgebra, b: &GradedAlgebra, cap: Option<usize>) -> GradedAlgebra {
    let natural = a.truncation() + b.truncation();
    let trunc = cap.map_or(natural, |c| c.min(natural));
    let complete = a.basis().is_complete() && b.basis().is_complete() && trunc == natural;

    // pair (i in A, j in B) -> new id, enumerated degree by degree for a
    // degree-sorted basis
    let mut pair_id = BTreeMap::new();
    let mut elements: Vec<(String, usize)> = Vec::new();
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for deg in 0..=trunc {
        for da in 0..=deg.min(a.truncation()) {
            let db = deg - da;
            if db > b.truncation() {
                continue;
            }
            for &i in a.basis().ids_of_degree(da) {
                for &j in b.basis().ids_of_degree(db) {
                    let mut name = tensor_name(a.basis(), b.basis(), i, j);
                    if !seen.insert(name.clone()) {
                        // factors share a generator name: fully qualify
                        name = format!("{}(x){}", a.basis().name(i), b.basis().name(j));
                        seen.insert(name.clone());
                    }
                    pair_id.insert((i, j), elements.len());
                    elements.push((name, deg));
                    pairs.push((i, j));
                }
            }
        }
    }
    let basis = GradedBasis::new(elements, trunc, complete).expect("tensor basis is well formed");

    let mut products = BTreeMap::new();
    for (x, &(i1, j1)) in pairs.iter().enumerate() {
        if basis.degree(x) == 0 {
            continue;
        }
        for (y, &(i2, j2)) in pairs.iter().enumerate() {
            if basis.degree(y) == 0 || basis.degree(x) + basis.degree(y) > trunc {
                continue;
            }
            let sign = koszul_sign(b.basis().degree(j1), a.basis().degree(i2));
            let pa = a.basis_product(i1, i2);
            let pb = b.basis_product(j1, j2);
            let mut out = Element::zero();
            if pa.is_truncated() || pb.is_truncated() {
                out.set_truncated();
            }
            for (ia, ca) in pa.terms() {
                for (jb, cb) in pb.terms() {
                    if let Some(&id) = pair_id.get(&(ia, jb)) {
                        out.add_term(id, &sign * ca * cb);
                    } else if !complete {
                        out.set_truncated();
                    }
                }
            }
            products.insert((x, y), out);
        }
    }
    GradedAlgebra::new(basis, products)
}

fn tensor_name(a: &GradedBasis, b: &GradedBasis, i: usize, j: usize) -> String {
    match (i, j) {
        (0, 0) => "1".to_string(),
        (_, 0) => a.name(i).to_string(),
        (0, _) => b.name(j).to_string(),
        _ => format!("{}(x){}", a.name(i), b.name(j)),
    }
}

/// Identifiers of the pure tensors `(i, j)` in the order produced by
/// [`tensor_product`]; used by callers that need the factor structure.
pub fn tensor_pairs(a: &GradedAlgebra, b: &GradedAlgebra, cap: Option<usize>) -> Vec<(usize, usize)> {
    let natural = a.truncation() + b.truncation();
    let trunc = cap.map_or(natural, |c| c.min(natural));
    let mut pairs = Vec::new();
    for deg in 0..=trunc {
        for da in 0..=deg.min(a.truncation()) {
            let db = deg - da;
            if db > b.truncation() {
                continue;
            }
            for &i in a.basis().ids_of_degree(da) {
                for &j in b.basis().ids_of_degree(db) {
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs
}
