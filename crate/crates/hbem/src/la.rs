//! Minimal dense and sparse linear algebra used by assembly and the solver.

use num_complex::Complex;
use num_traits::Zero;

use crate::{Error, Result, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    nrows: usize,
    ncols: usize,
    data: Vec<S>,
}

impl<S: Copy + Zero + std::ops::AddAssign + std::ops::Mul<Output = S> + Send + Sync>
    DenseMatrix<S>
{
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![S::zero(); nrows * ncols],
        }
    }

    pub fn from_rows(nrows: usize, ncols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), nrows * ncols);
        DenseMatrix { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    /// y += A x
    pub fn matvec_add(&self, x: &[S], y: &mut [S]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.ncols)) {
            let mut acc = S::zero();
            for (&a, &xj) in row.iter().zip(x) {
                acc += a * xj;
            }
            *yi += acc;
        }
    }
}

/// Compressed sparse row matrix with real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T: Scalar> {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, T)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0usize; nrows + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                let k = vals.len() - 1;
                vals[k] += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_offsets[r + 1] += row_offsets[r];
        }
        CsrMatrix {
            nrows,
            ncols,
            row_offsets,
            cols,
            vals,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        match self.cols[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k],
            Err(_) => T::zero(),
        }
    }

    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        (&self.cols[lo..hi], &self.vals[lo..hi])
    }

    pub fn sum(&self) -> T {
        self.vals.iter().copied().sum()
    }

    /// y += alpha * (A x) with complex x.
    pub fn matvec_add_complex(&self, alpha: Complex<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (&c, &v) in cols.iter().zip(vals) {
                acc += x[c] * v;
            }
            y[i] += alpha * acc;
        }
    }

    /// y += A x for real vectors.
    pub fn matvec_add(&self, x: &[T], y: &mut [T]) {
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = T::zero();
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[i] += acc;
        }
    }
}

/// Reverse Cuthill-McKee ordering; returns `perm` with `perm[new] = old`.
fn rcm_order<T: Scalar>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.nrows();
    let degree = |v: usize| a.row(v).0.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (degree(v), v));
    for &start in &starts {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a.row(v).0.iter().copied().filter(|&u| !visited[u]).collect();
            nbrs.sort_by_key(|&u| (degree(u), u));
            for u in nbrs {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factorization of a sparse SPD matrix within the envelope of its
/// reverse Cuthill-McKee reordering.
#[derive(Debug, Clone)]
pub struct SparseCholesky<T: Scalar> {
    n: usize,
    /// perm[new] = old
    perm: Vec<usize>,
    first: Vec<usize>,
    offsets: Vec<usize>,
    l: Vec<T>,
}

impl<T: Scalar> SparseCholesky<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Contract("cholesky needs a square matrix".into()));
        }
        let perm = rcm_order(a);
        let mut inv_perm = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }
        // envelope: first[i] = min permuted column among nonzeros of row i (and i itself)
        let mut first = vec![0usize; n];
        for new_i in 0..n {
            let mut lo = new_i;
            for &c in a.row(perm[new_i]).0 {
                let nc = inv_perm[c];
                if nc < lo {
                    lo = nc;
                }
            }
            first[new_i] = lo;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + (i - first[i] + 1);
        }
        let mut l = vec![T::zero(); offsets[n]];
        // scatter A into the envelope (lower triangle, permuted)
        for new_i in 0..n {
            let (cols, vals) = a.row(perm[new_i]);
            for (&c, &v) in cols.iter().zip(vals) {
                let new_j = inv_perm[c];
                if new_j <= new_i {
                    l[offsets[new_i] + (new_j - first[new_i])] += v;
                }
            }
        }
        // row-wise envelope factorization
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let start = fi.max(fj);
                let mut s = l[offsets[i] + (j - fi)];
                for k in start..j {
                    s -= l[offsets[i] + (k - fi)] * l[offsets[j] + (k - fj)];
                }
                let d = l[offsets[j] + (j - fj)];
                l[offsets[i] + (j - fi)] = s / d;
            }
            let mut s = l[offsets[i] + (i - fi)];
            for k in fi..i {
                let v = l[offsets[i] + (k - fi)];
                s -= v * v;
            }
            if !(s > T::zero()) || !s.is_finite() {
                return Err(Error::NotPositiveDefinite(i));
            }
            l[offsets[i] + (i - fi)] = s.sqrt();
        }
        Ok(SparseCholesky {
            n,
            perm,
            first,
            offsets,
            l,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves A x = b for complex right-hand sides.
    pub fn solve_complex(&self, b: &[Complex<T>], x: &mut [Complex<T>]) {
        debug_assert_eq!(b.len(), self.n);
        debug_assert_eq!(x.len(), self.n);
        let zero = Complex::new(T::zero(), T::zero());
        let mut y = vec![zero; self.n];
        // forward solve L y = P b
        for i in 0..self.n {
            let fi = self.first[i];
            let mut s = b[self.perm[i]];
            for k in fi..i {
                s -= y[k] * self.l[self.offsets[i] + (k - fi)];
            }
            y[i] = s / self.l[self.offsets[i] + (i - fi)];
        }
        // backward solve L^T z = y (in place on y)
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let s = y[i] / self.l[self.offsets[i] + (i - fi)];
            y[i] = s;
            for k in fi..i {
                let v = self.l[self.offsets[i] + (k - fi)];
                y[k] -= s * v;
            }
        }
        for i in 0..self.n {
            x[self.perm[i]] = y[i];
        }
    }
}
