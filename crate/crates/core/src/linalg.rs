//! Sparse complex matrices and a Lanczos solver for the lowest eigenpairs of
//! Hermitian operators.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type C64 = Complex64;

/// A linear map on `C^n` applied without materializing its matrix.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = A x`. Both slices have length [`dim`](Self::dim).
    fn apply(&self, x: &[C64], y: &mut [C64]);

    fn apply_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply(x, &mut y);
        y
    }
}

/// `⟨a|b⟩ = Σ conj(aᵢ) bᵢ`
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨bra|A|ket⟩`
pub fn matrix_element<A: LinearOperator + ?Sized>(op: &A, bra: &[C64], ket: &[C64]) -> Result<C64> {
    check_dim(op.dim(), bra.len())?;
    check_dim(op.dim(), ket.len())?;
    Ok(inner(bra, &op.apply_vec(ket)))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Compressed sparse row matrix with complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl CsrMatrix {
    /// Assembles a square matrix from `(row, col, value)` triplets. Repeated
    /// coordinates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}x{dim}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&col) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Iterates over stored `(row, col, value)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim)
            .flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k])))
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Convergence threshold on the Ritz residual `‖Ay − θy‖`, relative to
    /// the largest Ritz value magnitude.
    pub tol: f64,
    pub max_iter: usize,
    /// How often (in iterations) the tridiagonal problem is re-solved.
    pub check_every: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-12,
            max_iter: 1000,
            check_every: 10,
            seed: 0x5eed_f1c5,
        }
    }
}

/// Lowest eigenpairs in ascending order.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors, one per value.
    pub vectors: Vec<Vec<C64>>,
    /// Explicit residual norms `‖A v − λ v‖`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Lanczos iteration with full reorthogonalization for the `k` lowest
/// eigenpairs of a Hermitian operator.
///
/// The start vector is pseudo-random but seeded, so results are
/// reproducible. Exactly degenerate eigenvalues are resolved only once.
pub fn lowest_eigenpairs<A: LinearOperator + ?Sized>(op: &A, k: usize, opts: &LanczosOptions) -> Result<Eigenpairs> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::invalid("k", format!("need 1 <= k <= {n}, got {k}")));
    }
    let max_iter = opts.max_iter.min(n).max(k);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let q_norm = norm(&q);
    q.iter_mut().for_each(|z| *z /= q_norm);

    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(max_iter);
    let mut alpha: Vec<f64> = Vec::with_capacity(max_iter);
    let mut beta: Vec<f64> = Vec::with_capacity(max_iter);
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut last_estimates = vec![f64::INFINITY; k];

    loop {
        op.apply(&q, &mut w);
        let a = inner(&q, &w).re;
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= qi * a;
        }
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= pi * b;
            }
        }
        basis.push(std::mem::take(&mut q));
        alpha.push(a);

        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c = inner(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= vi * c;
                }
            }
        }
        let b = norm(&w);
        let m = basis.len();
        let exhausted = b <= f64::EPSILON * alpha.iter().fold(1.0f64, |s, x| s.max(x.abs()));

        if m >= k && (m.is_multiple_of(opts.check_every) || exhausted || m == max_iter) {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta);
            let scale = theta.iter().fold(1.0f64, |acc, t| acc.max(t.abs()));
            last_estimates = (0..k).map(|i| (b * s[(m - 1, i)]).abs()).collect();
            let converged = last_estimates.iter().all(|&r| r <= opts.tol * scale);
            if converged || exhausted {
                return Ok(finish(op, &basis, &s, k, m));
            }
            if m == max_iter {
                return Err(Error::NotConverged {
                    iterations: m,
                    residuals: last_estimates,
                });
            }
        }
        if exhausted || m == max_iter {
            return Err(Error::NotConverged {
                iterations: m,
                residuals: last_estimates,
            });
        }

        beta.push(b);
        q = w.iter().map(|z| z / b).collect();
    }
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let theta = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let s = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    (theta, s)
}

fn finish<A: LinearOperator + ?Sized>(
    op: &A,
    basis: &[Vec<C64>],
    s: &DMatrix<f64>,
    k: usize,
    iterations: usize,
) -> Eigenpairs {
    let n = op.dim();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for i in 0..k {
        let mut y = vec![C64::new(0.0, 0.0); n];
        for (j, v) in basis.iter().enumerate() {
            let c = s[(j, i)];
            for (yi, vi) in y.iter_mut().zip(v) {
                *yi += vi * c;
            }
        }
        let ny = norm(&y);
        y.iter_mut().for_each(|z| *z /= ny);
        let ay = op.apply_vec(&y);
        let lambda = inner(&y, &ay).re;
        let r = ay
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        values.push(lambda);
        vectors.push(y);
        residuals.push(r);
    }
    Eigenpairs {
        values,
        vectors,
        residuals,
        iterations,
    }
}
