//! Assembly of `G = Mass + sigma^2 Stiffness` and the dual-norm operators built on it.
//!
//! For `s >= 2` the Sobolev operator is taken as the `s`-th power of
//! `1 - sigma^2 Laplacian` acting on `W`, whose matrix is `(G M^{-1})^{s-1} G`.
//! Its inverse `G^{-1} (M G^{-1})^{s-1}` is applied by alternating solves with
//! `G` and products with the mass matrix `M`; for `s = 1` this is a single solve.

use std::sync::{Arc, OnceLock};

use super::{FormSpace, Half, LagrangeSpace, MonomialSpace};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, CsrMatrix, Triplet};
use crate::quadrature::triangle_rule;

/// The length scale `1 / sqrt(10)`.
pub const DEFAULT_SIGMA: f64 = 0.316_227_766_016_837_94;

#[derive(Debug)]
pub struct GramOperator {
    space: Arc<FormSpace>,
    sigma: f64,
    mass: CsrMatrix,
    stiffness: CsrMatrix,
    gram: CsrMatrix,
    factor: Cholesky,
    mass_factor: OnceLock<Option<Cholesky>>,
}

impl GramOperator {
    pub fn assemble(space: impl Into<Arc<FormSpace>>, sigma: f64) -> Result<Self> {
        let space = space.into();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Configuration(format!("sigma must be positive, got {sigma}")));
        }
        let (mass, stiffness) = match &*space {
            FormSpace::Lagrange(s) => assemble_lagrange(s),
            FormSpace::Monomial(s) => assemble_monomial(s),
        };
        let gram = mass.add_scaled(&stiffness, sigma * sigma);
        let factor = Cholesky::factorize(&gram).map_err(|e| Error::Assembly(format!("Gram matrix: {e}")))?;
        Ok(GramOperator {
            space,
            sigma,
            mass,
            stiffness,
            gram,
            factor,
            mass_factor: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn shared_space(&self) -> Arc<FormSpace> {
        Arc::clone(&self.space)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn mass(&self) -> &CsrMatrix {
        &self.mass
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.gram
    }

    pub fn factor(&self) -> &Cholesky {
        &self.factor
    }

    /// Cholesky factor of the mass matrix, computed on first use.
    pub fn mass_factor(&self) -> Result<&Cholesky> {
        self.mass_factor
            .get_or_init(|| Cholesky::factorize(&self.mass).ok())
            .as_ref()
            .ok_or_else(|| Error::Assembly("mass matrix is not positive definite".into()))
    }

    /// `G^{-1} rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.factor.solve(rhs)
    }

    /// Applies the inverse of the order-`s` operator: `G^{-1} (M G^{-1})^{s-1} rhs`.
    pub fn solve_power(&self, rhs: &[f64], s: u32) -> Vec<f64> {
        assert!(s >= 1, "Sobolev order must be at least 1");
        let mut b = self.solve(rhs);
        for _ in 1..s {
            b = self.solve(&self.mass.mul_vec(&b));
        }
        b
    }

    /// Applies the order-`s` operator `(G M^{-1})^{s-1} G`; inverse of [`Self::solve_power`].
    pub fn apply_power(&self, b: &[f64], s: u32) -> Result<Vec<f64>> {
        assert!(s >= 1, "Sobolev order must be at least 1");
        let mut v = self.gram.mul_vec(b);
        for _ in 1..s {
            let m = self.mass_factor()?;
            v = self.gram.mul_vec(&m.solve(&v));
        }
        Ok(v)
    }

    /// `f^T G^{-1} (M G^{-1})^{s-1} f`.
    pub fn dual_norm_squared(&self, f: &[f64], s: u32) -> f64 {
        crate::linalg::dot(f, &self.solve_power(f, s))
    }

    /// A linear map `f -> w` with `|w|^2 = f^T G^{-1} (M G^{-1})^{s-1} f`.
    ///
    /// Odd `s`: `w = L_G^{-1} P (M G^{-1})^{(s-1)/2} f`.
    /// Even `s`: `w = L_M^T P_M (G^{-1} M)^{s/2-1} G^{-1} f`.
    pub fn whiten(&self, f: &[f64], s: u32) -> Result<Vec<f64>> {
        assert!(s >= 1, "Sobolev order must be at least 1");
        if s % 2 == 1 {
            let mut v = f.to_vec();
            for _ in 0..(s - 1) / 2 {
                v = self.mass.mul_vec(&self.solve(&v));
            }
            Ok(self.factor.half_solve(&v))
        } else {
            let mut v = self.solve(f);
            for _ in 0..s / 2 - 1 {
                v = self.solve(&self.mass.mul_vec(&v));
            }
            Ok(self.mass_factor()?.half_multiply(&v))
        }
    }
}

fn element_matrices(space: &LagrangeSpace, half: Half) -> (Vec<f64>, Vec<f64>) {
    let el = space.element();
    let n = el.node_count();
    let area = space.mesh().triangle_area();
    let grads = space.lambda_gradients(half);
    let rule = triangle_rule(el.degree() + 2);
    let mut mass = vec![0.0; n * n];
    let mut stiff = vec![0.0; n * n];
    let mut vals = vec![0.0; n];
    let mut der = vec![[0.0; 3]; n];
    for &(s, t, w) in &rule {
        // reference weights sum to 1/2
        let w = 2.0 * w * area;
        let l = [1.0 - s - t, s, t];
        el.values(l, &mut vals);
        el.lambda_derivatives(l, &mut der);
        let g: Vec<_> = der
            .iter()
            .map(|d| grads[0] * d[0] + grads[1] * d[1] + grads[2] * d[2])
            .collect();
        for a in 0..n {
            for b in 0..n {
                mass[a * n + b] += w * vals[a] * vals[b];
                stiff[a * n + b] += w * g[a].dot(g[b]);
            }
        }
    }
    (mass, stiff)
}

fn assemble_lagrange(space: &LagrangeSpace) -> (CsrMatrix, CsrMatrix) {
    let n = space.local_count();
    let ndof = space.dof_count();
    let lower = element_matrices(space, Half::Lower);
    let upper = element_matrices(space, Half::Upper);
    let cells = space.mesh().triangle_count();
    let mut mt = Vec::with_capacity(cells * n * n);
    let mut st = Vec::with_capacity(cells * n * n);
    let mut dofs = vec![0; n];
    for cell in 0..cells {
        space.local_dofs(cell, &mut dofs);
        let (me, se) = match space.mesh().cell(cell).half {
            Half::Lower => (&lower.0, &lower.1),
            Half::Upper => (&upper.0, &upper.1),
        };
        for a in 0..n {
            for b in 0..n {
                mt.push(Triplet::new(dofs[a], dofs[b], me[a * n + b]));
                st.push(Triplet::new(dofs[a], dofs[b], se[a * n + b]));
            }
        }
    }
    (
        CsrMatrix::from_triplets(ndof, ndof, mt),
        CsrMatrix::from_triplets(ndof, ndof, st),
    )
}

/// `int_a^b x^k dx`.
fn power_integral(k: u32, a: f64, b: f64) -> f64 {
    let k1 = k as i32 + 1;
    (b.powi(k1) - a.powi(k1)) / k1 as f64
}

fn assemble_monomial(space: &MonomialSpace) -> (CsrMatrix, CsrMatrix) {
    let d = space.domain();
    let e = space.exponents();
    let n = e.len();
    let ix = |k: u32| power_integral(k, d.x0, d.x1);
    let iy = |k: u32| power_integral(k, d.y0, d.y1);
    let mut mass = vec![vec![0.0; n]; n];
    let mut stiff = vec![vec![0.0; n]; n];
    for (i, &(mi, ni)) in e.iter().enumerate() {
        for (j, &(mj, nj)) in e.iter().enumerate() {
            mass[i][j] = ix(mi + mj) * iy(ni + nj);
            let mut s = 0.0;
            if mi > 0 && mj > 0 {
                s += f64::from(mi * mj) * ix(mi + mj - 2) * iy(ni + nj);
            }
            if ni > 0 && nj > 0 {
                s += f64::from(ni * nj) * ix(mi + mj) * iy(ni + nj - 2);
            }
            stiff[i][j] = s;
        }
    }
    (CsrMatrix::from_dense(&mass), CsrMatrix::from_dense(&stiff))
}
