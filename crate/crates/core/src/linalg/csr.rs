use crate::error::{Error, Result};
use crate::scalar::Real;
use std::ops::Range;

/// Compressed sparse row matrix. Symmetric operators store both triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Assembled symmetric operator (both triangles stored).
pub type SymmetricSparseMatrix<T> = CsrMatrix<T>;

impl<T: Real> CsrMatrix<T> {
    /// Builds from raw CSR arrays; column indices in each row must be strictly
    /// increasing.
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 || col_idx.len() != values.len() || row_ptr[nrows] != values.len() {
            return Err(Error::InvalidInput("inconsistent CSR arrays".into()));
        }
        for i in 0..nrows {
            let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&c| c >= ncols) {
                return Err(Error::InvalidInput(format!("row {i} has unsorted or out of range columns")));
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Sums duplicate entries. The summation order of duplicates is the
    /// order in which they appear in `triplets`.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of bounds");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let mut m = Self::identity(d.len());
        m.values.copy_from_slice(d);
        m
    }

    /// Keeps entries with nonzero value.
    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != T::zero() {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, t)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                out[i][j] = v;
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => T::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = T::zero();
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[p] * x[self.col_idx[p]];
            }
            *yi = s;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// `x^T A x`
    pub fn quad_form(&self, x: &[T]) -> T {
        let mut s = T::zero();
        for i in 0..self.nrows {
            let mut r = T::zero();
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                r += self.values[p] * x[self.col_idx[p]];
            }
            s += x[i] * r;
        }
        s
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for i in 0..self.nrows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let c = self.col_idx[p];
                let q = next[c];
                col_idx[q] = i;
                values[q] = self.values[p];
                next[c] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_ptr: counts,
            col_idx,
            values,
        }
    }

    /// Sparse product `self * other` (row-by-row accumulation).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: other.nrows,
            });
        }
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut acc = vec![T::zero(); other.ncols];
        let mut marker = vec![usize::MAX; other.ncols];
        let mut cols: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            cols.clear();
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if marker[j] != i {
                        marker[j] = i;
                        acc[j] = T::zero();
                        cols.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            cols.sort_unstable();
            for &j in &cols {
                col_idx.push(j);
                values.push(acc[j]);
            }
            row_ptr[i + 1] = col_idx.len();
        }
        Ok(Self {
            nrows: self.nrows,
            ncols: other.ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Galerkin product `P^T self P`, symmetrized.
    pub fn galerkin(&self, p: &Self) -> Result<Self> {
        let ap = self.matmul(p)?;
        let c = p.transpose().matmul(&ap)?;
        Ok(c.symmetrized())
    }

    /// `(A + A^T) / 2`, assuming a symmetric sparsity pattern.
    pub fn symmetrized(&self) -> Self {
        let t = self.transpose();
        let half = T::lit(0.5);
        let mut triplets = Vec::with_capacity(2 * self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                triplets.push((i, j, v * half));
            }
            for (j, v) in t.row(i) {
                triplets.push((i, j, v * half));
            }
        }
        Self::from_triplets(self.nrows, self.ncols, triplets)
    }

    /// `A[rows, rows]` for a contiguous index range.
    pub fn principal_submatrix(&self, range: Range<usize>) -> Self {
        let n = range.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in range.clone() {
            for (j, v) in self.row(i) {
                if range.contains(&j) {
                    col_idx.push(j - range.start);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows: n,
            ncols: n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `max |A_ij - A_ji|`
    pub fn max_asymmetry(&self) -> T {
        if self.nrows != self.ncols {
            return T::infinity();
        }
        let mut m = T::zero();
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                m = m.max((v - self.get(j, i)).abs());
            }
        }
        m
    }

    pub fn is_symmetric(&self, rel_tol: T) -> bool {
        self.max_asymmetry() <= rel_tol * self.max_abs()
    }

    /// Entry-wise `self + scale * other` on the union pattern.
    pub fn add_scaled(&self, other: &Self, scale: T) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: other.nrows,
            });
        }
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.nrows {
            t.extend(self.row(i).map(|(j, v)| (i, j, v)));
            t.extend(other.row(i).map(|(j, v)| (i, j, scale * v)));
        }
        Ok(Self::from_triplets(self.nrows, self.ncols, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(n: usize) -> CsrMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, 2.0), (0, 0, 3.0), (0, 1, 5.0)]);
        assert_eq!(m.to_dense(), vec![vec![4.0, 5.0], vec![0.0, 2.0]]);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn matvec_and_quad_form() {
        let a = tri(4);
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(a.mul_vec(&x), vec![0.0, 0.0, 0.0, 5.0]);
        assert_eq!(a.quad_form(&x), 20.0);
    }

    #[test]
    fn galerkin_of_identity_prolongation() {
        let a = tri(5);
        let p = CsrMatrix::<f64>::identity(5);
        assert_eq!(a.galerkin(&p).unwrap(), a);
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0, 0.0], vec![0.0, 3.0, 4.0]]);
        let b = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![5.0, 6.0]]);
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.to_dense(), vec![vec![1.0, 2.0], vec![20.0, 27.0]]);
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn principal_blocks_match_dense_slicing() {
        // 4x4 arrow matrix
        let d = vec![
            vec![4.0, 0.0, 0.0, 1.0],
            vec![0.0, 5.0, 0.0, 2.0],
            vec![0.0, 0.0, 6.0, 3.0],
            vec![1.0, 2.0, 3.0, 7.0],
        ];
        let a = CsrMatrix::from_dense(&d);
        assert_eq!(a.principal_submatrix(0..2).to_dense(), vec![vec![4.0, 0.0], vec![0.0, 5.0]]);
        assert_eq!(a.principal_submatrix(2..4).to_dense(), vec![vec![6.0, 3.0], vec![3.0, 7.0]]);
        assert_eq!(a.principal_submatrix(0..4), a);
        assert!(a.is_symmetric(1e-15));
    }
}
