//! Up-looking sparse Cholesky factorization `P A P^T = L L^T`.

use super::csr::CsrMatrix;
use super::ordering::nested_dissection;
use super::Preconditioner;
use crate::error::{Error, Result};
use crate::scalar::Real;

const NONE: usize = usize::MAX;

/// Sparse Cholesky factor with a fill-reducing permutation.
#[derive(Clone, Debug)]
pub struct SparseCholesky<T> {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    // L by columns, diagonal entry first in each column
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> SparseCholesky<T> {
    /// Factorizes `a` with a nested dissection ordering.
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let perm = nested_dissection(a);
        Self::factor_with_ordering(a, perm)
    }

    /// Factorizes `a` in its given order.
    pub fn factor_natural(a: &CsrMatrix<T>) -> Result<Self> {
        Self::factor_with_ordering(a, (0..a.nrows()).collect())
    }

    pub fn factor_with_ordering(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.ncols(),
            });
        }
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        // permuted lower triangle by rows: row k holds (j, v) with j <= k
        let c = permuted_lower(a, &perm, &inv);
        let parent = etree(&c);

        // column counts of L by traversing every row subtree
        let mut counts = vec![1usize; n];
        let mut stack = vec![0usize; n];
        let mut mark = vec![NONE; n];
        for k in 0..n {
            let top = ereach(&c, k, &parent, &mut stack, &mut mark);
            for &j in &stack[top..] {
                counts[j] += 1;
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for j in 0..n {
            col_ptr[j + 1] = col_ptr[j] + counts[j];
        }
        let nnz = col_ptr[n];
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![T::zero(); nnz];
        let mut next: Vec<usize> = col_ptr[..n].to_vec();
        let mut x = vec![T::zero(); n];
        mark.iter_mut().for_each(|m| *m = NONE);

        for k in 0..n {
            let top = ereach(&c, k, &parent, &mut stack, &mut mark);
            for (j, v) in c.row(k) {
                x[j] = v;
            }
            let mut d = x[k];
            x[k] = T::zero();
            for &i in &stack[top..] {
                let lki = x[i] / values[col_ptr[i]];
                x[i] = T::zero();
                for p in col_ptr[i] + 1..next[i] {
                    x[row_idx[p]] -= values[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                row_idx[p] = k;
                values[p] = lki;
            }
            if !(d > T::zero()) {
                return Err(Error::NotPositiveDefinite {
                    row: perm[k],
                    value: d.as_f64(),
                });
            }
            let p = next[k];
            next[k] += 1;
            row_idx[p] = k;
            values[p] = d.sqrt();
        }
        Ok(Self {
            n,
            perm,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut z = vec![T::zero(); self.n];
        self.solve_into(b, &mut z);
        z
    }

    pub fn solve_into(&self, b: &[T], z: &mut [T]) {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        // L y = x
        for j in 0..n {
            let p0 = self.col_ptr[j];
            x[j] /= self.values[p0];
            let xj = x[j];
            for p in p0 + 1..self.col_ptr[j + 1] {
                x[self.row_idx[p]] -= self.values[p] * xj;
            }
        }
        // L^T z = y
        for j in (0..n).rev() {
            let p0 = self.col_ptr[j];
            let mut s = x[j];
            for p in p0 + 1..self.col_ptr[j + 1] {
                s -= self.values[p] * x[self.row_idx[p]];
            }
            x[j] = s / self.values[p0];
        }
        for (new, &old) in self.perm.iter().enumerate() {
            z[old] = x[new];
        }
    }
}

impl<T: Real> Preconditioner<T> for SparseCholesky<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, r: &[T], z: &mut [T]) {
        self.solve_into(r, z)
    }
}

fn permuted_lower<T: Real>(a: &CsrMatrix<T>, perm: &[usize], inv: &[usize]) -> CsrMatrix<T> {
    let n = a.nrows();
    let mut row_ptr = vec![0usize; n + 1];
    let mut entries: Vec<(usize, T)> = Vec::with_capacity(a.nnz() / 2 + n);
    let mut buf: Vec<(usize, T)> = Vec::new();
    for (k, &old) in perm.iter().enumerate() {
        buf.clear();
        buf.extend(a.row(old).map(|(j, v)| (inv[j], v)).filter(|&(j, _)| j <= k));
        buf.sort_unstable_by_key(|e| e.0);
        entries.extend_from_slice(&buf);
        row_ptr[k + 1] = entries.len();
    }
    let (col_idx, values) = entries.into_iter().unzip();
    CsrMatrix::from_raw(n, n, row_ptr, col_idx, values).expect("valid permuted pattern")
}

fn etree<T: Real>(c: &CsrMatrix<T>) -> Vec<usize> {
    let n = c.nrows();
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for k in 0..n {
        for (mut i, _) in c.row(k) {
            while i != NONE && i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == NONE {
                    parent[i] = k;
                }
                i = next;
            }
        }
    }
    parent
}

/// Nonzero pattern of row `k` of `L` (excluding the diagonal) in
/// topological order, stored in `stack[top..]`.
fn ereach<T: Real>(c: &CsrMatrix<T>, k: usize, parent: &[usize], stack: &mut [usize], mark: &mut [usize]) -> usize {
    let n = c.nrows();
    let mut top = n;
    mark[k] = k;
    let mut path = Vec::new();
    for (mut i, _) in c.row(k) {
        if i >= k {
            continue;
        }
        path.clear();
        while mark[i] != k {
            path.push(i);
            mark[i] = k;
            i = parent[i];
        }
        while let Some(v) = path.pop() {
            top -= 1;
            stack[top] = v;
        }
    }
    top
}
