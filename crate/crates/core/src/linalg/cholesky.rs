//! Up-looking sparse Cholesky factorization `P A P^T = L L^T`.
//!
//! The symbolic phase builds the elimination tree of the permuted matrix and
//! counts the nonzeros of each column of `L` by walking row subtrees; the
//! numeric phase computes `L` one row at a time with a sparse triangular
//! solve over that row's pattern.

use super::{nested_dissection, CsrMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    /// `perm[k]` is the original index of the `k`-th pivot.
    perm: Vec<usize>,
    /// `L` in compressed sparse column form; the diagonal is the first entry of each column.
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Upper triangle of `P A P^T` stored by columns.
struct PermutedUpper {
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl PermutedUpper {
    fn new(a: &CsrMatrix, perm: &[usize], inv: &[usize]) -> Self {
        let n = perm.len();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::with_capacity(a.nnz() / 2 + n);
        let mut values = Vec::with_capacity(a.nnz() / 2 + n);
        col_ptr.push(0);
        for (k, &orig) in perm.iter().enumerate() {
            // Symmetric storage: row `orig` of A is column `orig`.
            for (j, v) in a.row(orig) {
                let i = inv[j];
                if i <= k {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        PermutedUpper {
            col_ptr,
            row_idx,
            values,
        }
    }

    fn column(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[k]..self.col_ptr[k + 1];
        self.row_idx[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }
}

const NONE: usize = usize::MAX;

fn elimination_tree(c: &PermutedUpper, n: usize) -> Vec<usize> {
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for k in 0..n {
        for (mut i, _) in c.column(k) {
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

/// Nonzero pattern of row `k` of `L` (excluding the diagonal), written to
/// `stack[top..]` in topological order. Returns `top`.
fn row_pattern(
    c: &PermutedUpper,
    k: usize,
    parent: &[usize],
    flag: &mut [usize],
    stack: &mut [usize],
    path: &mut Vec<usize>,
) -> usize {
    let n = parent.len();
    let mut top = n;
    flag[k] = k;
    for (mut i, _) in c.column(k) {
        if i >= k {
            continue;
        }
        path.clear();
        while flag[i] != k {
            path.push(i);
            flag[i] = k;
            i = parent[i];
        }
        while let Some(v) = path.pop() {
            top -= 1;
            stack[top] = v;
        }
    }
    top
}

impl Cholesky {
    /// Factorizes a symmetric positive definite matrix using a nested
    /// dissection ordering. Only the full symmetric storage is read.
    pub fn factorize(a: &CsrMatrix) -> Result<Self> {
        let perm = nested_dissection(a);
        Cholesky::factorize_with_ordering(a, perm)
    }

    pub fn factorize_with_ordering(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Assembly(format!(
                "Cholesky needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let c = PermutedUpper::new(a, &perm, &inv);
        let parent = elimination_tree(&c, n);

        let mut flag = vec![NONE; n];
        let mut stack = vec![0; n];
        let mut path = Vec::new();

        // Column counts.
        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = row_pattern(&c, k, &parent, &mut flag, &mut stack, &mut path);
            for &i in &stack[top..] {
                counts[i] += 1;
            }
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        col_ptr.push(0);
        for &cnt in &counts {
            col_ptr.push(col_ptr.last().unwrap() + cnt);
        }
        let nnz = col_ptr[n];
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![0.0f64; nnz];
        let mut next: Vec<usize> = col_ptr[..n].to_vec();

        flag.fill(NONE);
        let mut x = vec![0.0f64; n];
        for k in 0..n {
            let top = row_pattern(&c, k, &parent, &mut flag, &mut stack, &mut path);
            let mut diag_in = 0.0;
            for (i, v) in c.column(k) {
                if i <= k {
                    x[i] += v;
                }
                if i == k {
                    diag_in = v;
                }
            }
            let mut d = x[k];
            x[k] = 0.0;
            for &i in &stack[top..] {
                let lki = x[i] / values[col_ptr[i]];
                x[i] = 0.0;
                for p in col_ptr[i] + 1..next[i] {
                    x[row_idx[p]] -= values[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                row_idx[p] = k;
                values[p] = lki;
            }
            if !(d > 1e-14 * diag_in.abs()) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    pivot: perm[k],
                    value: d,
                });
            }
            let p = next[k];
            next[k] += 1;
            row_idx[p] = k;
            values[p] = d.sqrt();
        }

        Ok(Cholesky {
            n,
            perm,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored entries of `L`.
    pub fn factor_nnz(&self) -> usize {
        self.values.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    fn permute(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "right-hand side has the wrong length");
        self.perm.iter().map(|&p| b[p]).collect()
    }

    fn unpermute(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    fn forward_in_place(&self, y: &mut [f64]) {
        for j in 0..self.n {
            let start = self.col_ptr[j];
            let yj = y[j] / self.values[start];
            y[j] = yj;
            for p in start + 1..self.col_ptr[j + 1] {
                y[self.row_idx[p]] -= self.values[p] * yj;
            }
        }
    }

    fn backward_in_place(&self, y: &mut [f64]) {
        for j in (0..self.n).rev() {
            let start = self.col_ptr[j];
            let mut s = y[j];
            for p in start + 1..self.col_ptr[j + 1] {
                s -= self.values[p] * y[self.row_idx[p]];
            }
            y[j] = s / self.values[start];
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = self.permute(b);
        self.forward_in_place(&mut y);
        self.backward_in_place(&mut y);
        self.unpermute(&y)
    }

    /// `L^{-1} P b`. Its squared norm is `b^T A^{-1} b`.
    pub fn half_solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = self.permute(b);
        self.forward_in_place(&mut y);
        y
    }

    /// `L^T P x`. Its squared norm is `x^T A x`.
    pub fn half_multiply(&self, x: &[f64]) -> Vec<f64> {
        let y = self.permute(x);
        let mut out = vec![0.0; self.n];
        for (j, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                s += self.values[p] * y[self.row_idx[p]];
            }
            *o = s;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, Triplet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, density: f64, seed: u64) -> CsrMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Vec::new();
        let mut diag = vec![1.0; n];
        for i in 0..n {
            for j in 0..i {
                if rng.random::<f64>() < density {
                    let v: f64 = rng.random_range(-1.0..1.0);
                    t.push(Triplet::new(i, j, v));
                    t.push(Triplet::new(j, i, v));
                    diag[i] += v.abs();
                    diag[j] += v.abs();
                }
            }
        }
        for (i, d) in diag.into_iter().enumerate() {
            t.push(Triplet::new(i, i, d));
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn solves_random_spd_systems() {
        for (n, density, seed) in [(5, 0.8, 1), (60, 0.1, 2), (400, 0.01, 3)] {
            let a = random_spd(n, density, seed);
            let chol = Cholesky::factorize(&a).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 10);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b = a.mul_vec(&x);
            let got = chol.solve(&b);
            let err = got.iter().zip(&x).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n={n}: {err}");
        }
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let chol = Cholesky::factorize(&CsrMatrix::identity(7)).unwrap();
        let b = vec![1.0, -2.0, 3.0, 0.5, 0.0, 9.0, 1e-3];
        assert_eq!(chol.solve(&b), b);
    }

    #[test]
    fn half_solve_and_multiply_give_quadratic_forms() {
        let a = random_spd(150, 0.05, 9);
        let chol = Cholesky::factorize(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b: Vec<f64> = (0..150).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w = chol.half_solve(&b);
        let expect = dot(&b, &chol.solve(&b));
        assert!((dot(&w, &w) - expect).abs() < 1e-10 * expect.abs());
        let v = chol.half_multiply(&b);
        let expect = a.quadratic_form(&b);
        assert!((dot(&v, &v) - expect).abs() < 1e-10 * expect.abs());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(
            Cholesky::factorize(&a),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
