//! Sparse symmetric matrices and their Cholesky factorization.

mod cholesky;
mod ordering;
mod sparse;

pub use cholesky::Cholesky;
pub use ordering::nested_dissection;
pub use sparse::{CsrMatrix, Triplet};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
