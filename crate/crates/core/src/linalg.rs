//! Exact linear algebra over the rationals.
//!
//! Everything here is dense row reduction at desk scale, plus a sparse
//! incremental eliminator used by the derivation solver where constraint
//! systems can have many near-empty rows.

use crate::scalar::{one, zero, Rat};
use num_traits::Zero;

/// Dense matrix over `Q`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = {
                let piv = self.at(r, c).clone();
                one() / piv
            };
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![zero(); self.cols];
            v[free] = one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(ri, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `Ax = b`; returns any solution or `None` if inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(ri, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.at(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Row-reduces the given vectors and returns a deterministic basis of their
/// span (the nonzero rows of the RREF).
pub fn span_basis(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols, dim);
    let pivots = m.rref();
    (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
}

/// Indices of input vectors forming a basis of the span (greedy, in order).
pub fn independent_subset(vectors: &[Vec<Rat>]) -> Vec<usize> {
    let mut elim = SparseEliminator::new();
    let mut chosen = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let row: Vec<(usize, Rat)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        if elim.insert(row) {
            chosen.push(i);
        }
    }
    chosen
}

/// Incremental sparse Gaussian eliminator over `Q`.
///
/// Rows are kept reduced against each other; `insert` reports whether the
/// row was independent of everything seen so far.
pub struct SparseEliminator {
    /// pivot column -> reduced row (sorted by column, leading coeff 1)
    rows: std::collections::BTreeMap<usize, Vec<(usize, Rat)>>,
}

impl Default for SparseEliminator {
    fn default() -> Self {
        Self::new()
    }
}

impl SparseEliminator {
    pub fn new() -> Self {
        SparseEliminator {
            rows: std::collections::BTreeMap::new(),
        }
    }

    /// Reduces `row` against the stored rows; if a nonzero remainder is left
    /// it is stored and `true` is returned.
    pub fn insert(&mut self, row: Vec<(usize, Rat)>) -> bool {
        match self.reduce(row) {
            Some(r) => {
                let lead = r[0].0;
                self.rows.insert(lead, r);
                true
            }
            None => false,
        }
    }

    /// Fully reduces `row`; `None` means it reduced to zero.
    fn reduce(&self, mut row: Vec<(usize, Rat)>) -> Option<Vec<(usize, Rat)>> {
        loop {
            row.retain(|(_, v)| !v.is_zero());
            let Some(&(lead, ref lv)) = row.first() else {
                return None;
            };
            match self.rows.get(&lead) {
                None => {
                    // normalize leading coefficient to 1
                    let inv = one() / lv.clone();
                    for (_, v) in row.iter_mut() {
                        *v *= &inv;
                    }
                    return Some(row);
                }
                Some(pivot_row) => {
                    let f = lv.clone();
                    row = sub_scaled(&row, pivot_row, &f);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Nullspace basis of the accumulated row system with `ncols` unknowns.
    pub fn nullspace(&self, ncols: usize) -> Vec<Vec<Rat>> {
        // Back-substitute rows into fully reduced form first.
        let mut reduced: Vec<Vec<(usize, Rat)>> = Vec::new();
        for row in self.rows.values().rev() {
            let mut r = row.clone();
            // eliminate later pivots (reduced already contains rows with larger leads)
            for done in &reduced {
                let lead = done[0].0;
                if let Some(&(_, ref c)) = r.iter().find(|(j, _)| *j == lead) {
                    let f = c.clone();
                    r = sub_scaled(&r, done, &f);
                }
            }
            reduced.push(r);
        }
        reduced.reverse();
        let pivot_cols: Vec<usize> = reduced.iter().map(|r| r[0].0).collect();
        let is_pivot = {
            let mut s = vec![false; ncols];
            for &p in &pivot_cols {
                s[p] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![zero(); ncols];
            v[free] = one();
            for r in &reduced {
                let lead = r[0].0;
                if let Some((_, c)) = r.iter().find(|(j, _)| *j == free) {
                    v[lead] = -c.clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

fn sub_scaled(row: &[(usize, Rat)], pivot: &[(usize, Rat)], f: &Rat) -> Vec<(usize, Rat)> {
    // row - f * pivot, merging sorted sparse vectors
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < pivot.len() {
        if b == pivot.len() || (a < row.len() && row[a].0 < pivot[b].0) {
            out.push(row[a].clone());
            a += 1;
        } else if a == row.len() || pivot[b].0 < row[a].0 {
            let v = -f * &pivot[b].1;
            if !v.is_zero() {
                out.push((pivot[b].0, v));
            }
            b += 1;
        } else {
            let v = &row[a].1 - f * &pivot[b].1;
            if !v.is_zero() {
                out.push((row[a].0, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = a.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn sparse_eliminator_matches_dense_nullspace() {
        let a = m(&[&[1, 2, 3, 0], &[0, 1, 1, 1], &[1, 3, 4, 1]]);
        let mut e = SparseEliminator::new();
        for i in 0..a.rows {
            let row: Vec<(usize, Rat)> = a
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect();
            e.insert(row);
        }
        assert_eq!(e.rank(), a.rank());
        let ns = e.nullspace(4);
        assert_eq!(ns.len(), 4 - a.rank());
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn independent_subset_picks_first_basis() {
        let vs = vec![
            vec![int(1), int(0)],
            vec![int(2), int(0)],
            vec![int(0), int(5)],
        ];
        assert_eq!(independent_subset(&vs), vec![0, 2]);
    }
}
