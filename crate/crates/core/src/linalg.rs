//! Dense exact linear algebra over a [`Field`].
//!
//! Pivoting always takes the first nonzero entry, so every basis produced
//! here is reproducible run to run.

use std::fmt;

use crate::error::{ArcError, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(ArcError::Shape(format!(
                    "row {i} has length {} but {cols} columns were requested",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != rhs.rows {
            return Err(ArcError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![F::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o = o.clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Result<Matrix<F>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ArcError::Shape("cannot add matrices of different shapes".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(ArcError::Shape(format!(
                "right-hand side has length {} but matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// A subspace of `F^dim` held as a fully reduced echelon basis.
///
/// Rows are kept sorted by pivot column, each pivot column is zero in every
/// other row, and every pivot entry is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<F> {
    dim: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut e = Self::new(dim);
        for i in 0..dim {
            let mut v = vec![F::zero(); dim];
            v[i] = F::one();
            e.rows.push(v);
            e.pivots.push(i);
        }
        e
    }

    pub fn from_vectors<'a, I>(dim: usize, vs: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<F>>,
    {
        let mut e = Self::new(dim);
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating against the basis.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span. Returns false if it was already there.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for row in self.rows.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![F::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in recon.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() + c.clone() * r.clone();
                }
            }
        }
        if recon.as_slice() == v {
            Some(coords)
        } else {
            None
        }
    }

    /// Columns not used as pivots; the standard basis vectors at these
    /// positions span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Coordinates of the class of `v` in the quotient by this subspace,
    /// relative to the complement spanned by [`Self::free_columns`].
    pub fn quotient_coordinates(&self, v: Vec<F>) -> Vec<F> {
        let r = self.reduce(v);
        self.free_columns().into_iter().map(|c| r[c].clone()).collect()
    }

    pub fn sum(&self, other: &Echelon<F>) -> Echelon<F> {
        let mut e = self.clone();
        for v in &other.rows {
            e.insert(v.clone());
        }
        e
    }

    pub fn intersection(&self, other: &Echelon<F>) -> Echelon<F> {
        // Solve sum a_i u_i = sum b_j w_j.
        let n = self.dim;
        let k = self.rows.len();
        let cols: Vec<Vec<F>> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|w| w.iter().map(|x| -x.clone()).collect()))
            .collect();
        if cols.is_empty() {
            return Echelon::new(n);
        }
        let m = Matrix::from_columns(&cols, n);
        let mut out = Echelon::new(n);
        for sol in m.kernel_basis() {
            let mut v = vec![F::zero(); n];
            for (a, u) in sol[..k].iter().zip(&self.rows) {
                if a.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(u) {
                    *x = x.clone() + a.clone() * y.clone();
                }
            }
            out.insert(v);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Echelon<F>) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }
}

/// Smallest subspace containing `seeds` and stable under every operator.
pub fn spin<F: Field>(dim: usize, seeds: &[Vec<F>], operators: &[Matrix<F>]) -> Result<Echelon<F>> {
    for op in operators {
        if op.rows() != dim || op.cols() != dim {
            return Err(ArcError::Shape(format!(
                "operator is {}x{} but the space has dimension {dim}",
                op.rows(),
                op.cols()
            )));
        }
    }
    let mut span = Echelon::new(dim);
    let mut queue: Vec<Vec<F>> = Vec::new();
    for s in seeds {
        if s.len() != dim {
            return Err(ArcError::Shape("seed has the wrong length".into()));
        }
        if span.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in operators {
            let w = op.mul_vec(&v);
            if span.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    Ok(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F2};
    use proptest::prelude::*;

    fn q(rows: &[Vec<i64>]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_of_identity() {
        for k in 0..5 {
            assert_eq!(Matrix::<Rational>::identity(k).rank(), k);
        }
    }

    #[test]
    fn kernel_of_zero_map() {
        let z = Matrix::<Rational>::zeros(1, 2);
        assert_eq!(z.kernel_basis().len(), 2);
    }

    #[test]
    fn spin_jordan_block() {
        // J_2 sends e_1 to e_2 and kills e_2.
        let j2 = q(&[vec![0, 0], vec![1, 0]]);
        let e2 = vec![Rational::from_i64(0), Rational::from_i64(1)];
        let e1 = vec![Rational::from_i64(1), Rational::from_i64(0)];
        assert_eq!(spin(2, &[e1], &[j2.clone()]).unwrap().dim(), 2);
        assert_eq!(spin(2, &[e2], &[j2]).unwrap().dim(), 1);
    }

    #[test]
    fn spin_rejects_bad_operator() {
        let op = Matrix::<Rational>::zeros(2, 3);
        assert!(spin(2, &[], &[op]).is_err());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = q(&[vec![1, 1], vec![2, 2]]);
        let b = vec![Rational::from_i64(1), Rational::from_i64(2)];
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let b2 = vec![Rational::from_i64(1), Rational::from_i64(3)];
        assert!(a.solve(&b2).unwrap().is_none());
        assert!(a.solve(&b2[..1]).is_err());
    }

    #[test]
    fn characteristic_changes_rank() {
        let rows = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(q(&rows).rank(), 2);
        assert_eq!(Matrix::<F2>::from_i64_rows(&rows).rank(), 1);
    }

    #[test]
    fn intersection_and_sum() {
        let e = |v: &[i64]| v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
        let a = Echelon::from_vectors(3, &[e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Echelon::from_vectors(3, &[e(&[0, 1, 0]), e(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a.intersection(&b).contains(&e(&[0, 5, 0])));
    }

    #[test]
    fn inverse_round_trip() {
        let a = q(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(q(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = q(&rows);
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
            for v in m.kernel_basis() {
                prop_assert!(m.mul_vec(&v).iter().all(|x| num_traits::Zero::is_zero(x)));
            }
        }

        #[test]
        fn rref_is_idempotent(rows in small_matrix()) {
            let (r, p) = q(&rows).rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(p, p2);
        }

        #[test]
        fn spin_is_stable(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 4),
                          seed in proptest::collection::vec(-2i64..3, 4)) {
            let op = q(&rows);
            let s: Vec<Rational> = seed.iter().map(|&x| Rational::from_i64(x)).collect();
            let span = spin(4, &[s], &[op.clone()]).unwrap();
            for v in span.basis() {
                prop_assert!(span.contains(&op.mul_vec(v)));
            }
        }

        #[test]
        fn echelon_matches_rank(rows in small_matrix()) {
            let m = q(&rows);
            let vs: Vec<Vec<Rational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
            let e = Echelon::from_vectors(m.cols(), &vs);
            prop_assert_eq!(e.dim(), m.rank());
            for v in &vs {
                let c = e.coordinates(v);
                prop_assert!(c.is_some());
            }
        }
    }
}
