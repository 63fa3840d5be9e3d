//! Blocked 2x2 complex linear algebra, mass preconditioning and GMRES.

use std::time::Instant;

use num_complex::Complex;

use crate::la::{CsrMatrix, DenseMatrix, SparseCholesky};
use crate::operators::MassMatrix;
use crate::{Cplx, Error, Result, Scalar};

/// 2x2 block operator: four dense complex blocks plus optional sparse
/// additive terms per block (the mass terms of the penalty form).
#[derive(Debug, Clone)]
pub struct BlockOperator<T: Scalar> {
    blocks: [[DenseMatrix<Cplx<T>>; 2]; 2],
    sparse: [[Vec<(Cplx<T>, CsrMatrix<T>)>; 2]; 2],
    row_dims: [usize; 2],
    col_dims: [usize; 2],
}

impl<T: Scalar> BlockOperator<T> {
    pub fn new(blocks: [[DenseMatrix<Cplx<T>>; 2]; 2]) -> Result<Self> {
        let row_dims = [blocks[0][0].nrows(), blocks[1][0].nrows()];
        let col_dims = [blocks[0][0].ncols(), blocks[0][1].ncols()];
        for i in 0..2 {
            for j in 0..2 {
                if blocks[i][j].nrows() != row_dims[i] || blocks[i][j].ncols() != col_dims[j] {
                    return Err(Error::Contract(format!(
                        "block ({i},{j}) has shape {}x{}, expected {}x{}",
                        blocks[i][j].nrows(),
                        blocks[i][j].ncols(),
                        row_dims[i],
                        col_dims[j]
                    )));
                }
            }
        }
        Ok(BlockOperator {
            blocks,
            sparse: Default::default(),
            row_dims,
            col_dims,
        })
    }

    /// Adds `coefficient * M` to block (i, j).
    pub fn add_sparse_term(
        &mut self,
        i: usize,
        j: usize,
        coefficient: Cplx<T>,
        matrix: CsrMatrix<T>,
    ) -> Result<()> {
        if matrix.nrows() != self.row_dims[i] || matrix.ncols() != self.col_dims[j] {
            return Err(Error::Contract(format!(
                "sparse term for block ({i},{j}) has shape {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                self.row_dims[i],
                self.col_dims[j]
            )));
        }
        self.sparse[i][j].push((coefficient, matrix));
        Ok(())
    }

    pub fn row_dims(&self) -> [usize; 2] {
        self.row_dims
    }

    pub fn col_dims(&self) -> [usize; 2] {
        self.col_dims
    }

    pub fn n_rows_total(&self) -> usize {
        self.row_dims[0] + self.row_dims[1]
    }

    pub fn n_cols_total(&self) -> usize {
        self.col_dims[0] + self.col_dims[1]
    }

    pub fn block(&self, i: usize, j: usize) -> &DenseMatrix<Cplx<T>> {
        &self.blocks[i][j]
    }

    /// y = A x over the stacked (first block, second block) layout.
    pub fn apply(&self, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        debug_assert_eq!(x.len(), self.n_cols_total());
        debug_assert_eq!(y.len(), self.n_rows_total());
        let zero = Complex::new(T::zero(), T::zero());
        y.fill(zero);
        let (xu, xl) = x.split_at(self.col_dims[0]);
        let (yu, yl) = y.split_at_mut(self.row_dims[0]);
        for (i, yi) in [(0usize, yu), (1usize, yl)] {
            for (j, xj) in [(0usize, xu), (1usize, xl)] {
                self.blocks[i][j].matvec_add(xj, yi);
                for (coef, m) in &self.sparse[i][j] {
                    m.matvec_add_complex(*coef, xj, yi);
                }
            }
        }
    }
}

/// Block-diagonal mass preconditioner backed by sparse Cholesky factors.
#[derive(Debug, Clone)]
pub struct Preconditioner<T: Scalar> {
    factor_u: SparseCholesky<T>,
    factor_l: SparseCholesky<T>,
}

impl<T: Scalar> Preconditioner<T> {
    /// Factors the two mass matrices once; both must be SPD.
    pub fn build(mass_u: &MassMatrix<T>, mass_l: &MassMatrix<T>) -> Result<Self> {
        Self::from_csr(mass_u.csr(), mass_l.csr())
    }

    pub fn from_csr(mass_u: &CsrMatrix<T>, mass_l: &CsrMatrix<T>) -> Result<Self> {
        Ok(Preconditioner {
            factor_u: SparseCholesky::factor(mass_u)?,
            factor_l: SparseCholesky::factor(mass_l)?,
        })
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.factor_u.n(), self.factor_l.n()]
    }

    /// out = (M_u^{-1} r_u, M_l^{-1} r_l)
    pub fn apply(&self, r: &[Cplx<T>], out: &mut [Cplx<T>]) {
        let nu = self.factor_u.n();
        let (ru, rl) = r.split_at(nu);
        let (ou, ol) = out.split_at_mut(nu);
        self.factor_u.solve_complex(ru, ou);
        self.factor_l.solve_complex(rl, ol);
    }
}

/// Iteration record of one GMRES solve.
#[derive(Debug, Clone)]
pub struct SolveReport<T: Scalar> {
    pub iterations: usize,
    /// Preconditioned relative residual after each iteration.
    pub residual_history: Vec<T>,
    pub converged: bool,
    pub wall_time: f64,
}

/// Left-preconditioned GMRES without restart. Stops when the preconditioned
/// relative residual drops below `tol`; hitting `maxiter` returns a
/// non-converged report rather than an error.
pub fn gmres_solve<T: Scalar>(
    a: &BlockOperator<T>,
    b: &[Cplx<T>],
    p: &Preconditioner<T>,
    tol: T,
    maxiter: usize,
) -> (Vec<Cplx<T>>, SolveReport<T>) {
    let start = Instant::now();
    let n = a.n_cols_total();
    debug_assert_eq!(b.len(), a.n_rows_total());
    let zero = Complex::new(T::zero(), T::zero());

    let mut g0 = vec![zero; n];
    p.apply(b, &mut g0);
    let beta = vec_norm(&g0);
    if beta == T::zero() {
        return (
            vec![zero; n],
            SolveReport {
                iterations: 0,
                residual_history: Vec::new(),
                converged: true,
                wall_time: start.elapsed().as_secs_f64(),
            },
        );
    }

    let mut basis: Vec<Vec<Cplx<T>>> = Vec::with_capacity(maxiter + 1);
    basis.push(g0.iter().map(|z| z / beta).collect());

    // Hessenberg columns after Givens elimination
    let mut h_cols: Vec<Vec<Cplx<T>>> = Vec::with_capacity(maxiter);
    let mut givens: Vec<(T, Cplx<T>)> = Vec::with_capacity(maxiter);
    let mut g = vec![zero; maxiter + 1];
    g[0] = Complex::new(beta, T::zero());
    let mut history = Vec::new();
    let mut converged = false;

    let mut ax = vec![zero; a.n_rows_total()];
    let mut w = vec![zero; n];

    for j in 0..maxiter {
        a.apply(&basis[j], &mut ax);
        p.apply(&ax, &mut w);

        let mut h = vec![zero; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = conj_dot(v, &w);
            h[i] = hij;
            for (wk, vk) in w.iter_mut().zip(v) {
                *wk -= hij * vk;
            }
        }
        let wnorm = vec_norm(&w);
        h[j + 1] = Complex::new(wnorm, T::zero());

        // previously accumulated rotations
        for (i, &(c, s)) in givens.iter().enumerate() {
            let hi = h[i];
            let hi1 = h[i + 1];
            h[i] = hi * c + s * hi1;
            h[i + 1] = hi1 * c - s.conj() * hi;
        }
        // new rotation zeroing h[j+1]
        let (c, s) = make_givens(h[j], h[j + 1]);
        h[j] = h[j] * c + s * h[j + 1];
        h[j + 1] = zero;
        let gj = g[j];
        g[j] = gj * c;
        g[j + 1] = -(s.conj()) * gj;
        givens.push((c, s));
        h_cols.push(h);

        let rel = g[j + 1].norm() / beta;
        history.push(rel);

        if rel <= tol {
            converged = true;
            break;
        }
        if wnorm == T::zero() {
            // exact breakdown: Krylov space exhausted, solution is exact
            converged = true;
            break;
        }
        basis.push(w.iter().map(|z| z / wnorm).collect());
    }

    let iters = history.len();
    // back substitution on the triangular system
    let mut y = vec![zero; iters];
    for i in (0..iters).rev() {
        let mut s = g[i];
        for (jj, yj) in y.iter().enumerate().skip(i + 1) {
            s -= h_cols[jj][i] * *yj;
        }
        y[i] = s / h_cols[i][i];
    }
    let mut x = vec![zero; n];
    for (yi, v) in y.iter().zip(&basis) {
        for (xk, vk) in x.iter_mut().zip(v) {
            *xk += *yi * vk;
        }
    }

    (
        x,
        SolveReport {
            iterations: iters,
            residual_history: history,
            converged,
            wall_time: start.elapsed().as_secs_f64(),
        },
    )
}

fn vec_norm<T: Scalar>(v: &[Cplx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn conj_dot<T: Scalar>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Complex Givens rotation (c real, s complex) with
/// -conj(s) a + c b = 0 and c^2 + |s|^2 = 1.
fn make_givens<T: Scalar>(a: Cplx<T>, b: Cplx<T>) -> (T, Cplx<T>) {
    let an = a.norm();
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    if an == T::zero() {
        return (T::zero(), b.conj() / bn);
    }
    let t = (an * an + bn * bn).sqrt();
    let c = an / t;
    let s = (a / an) * b.conj() / t;
    (c, s)
}
