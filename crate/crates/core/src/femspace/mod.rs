//! Test-form spaces and their `H^1_sigma` Gram operators.
//!
//! A 1-form basis element is `w_i dx` or `w_i dy` for a scalar basis function
//! `w_i`; the two components share one scalar space and one Gram matrix.

mod gram;
mod lagrange;
mod mesh;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

pub use gram::{GramOperator, DEFAULT_SIGMA};
pub use lagrange::LagrangeElement;
pub use mesh::{Cell, ClippedPiece, Half, StructuredMesh};

/// Serializable description of a space, e.g.
/// `{"kind":"lagrange","M":10,"degree":1,"domain":[-1,1,-1,1]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceDescriptor {
    Lagrange {
        #[serde(rename = "M")]
        m: usize,
        degree: usize,
        #[serde(default)]
        domain: Rect,
    },
    Monomial {
        #[serde(rename = "N")]
        n: usize,
        #[serde(default)]
        domain: Rect,
    },
}

impl SpaceDescriptor {
    pub fn lagrange(m: usize, degree: usize) -> Self {
        SpaceDescriptor::Lagrange {
            m,
            degree,
            domain: Rect::default(),
        }
    }

    pub fn monomial(n: usize) -> Self {
        SpaceDescriptor::Monomial {
            n,
            domain: Rect::default(),
        }
    }

    pub fn domain(&self) -> Rect {
        match *self {
            SpaceDescriptor::Lagrange { domain, .. } | SpaceDescriptor::Monomial { domain, .. } => domain,
        }
    }

    pub fn with_domain(self, domain: Rect) -> Self {
        match self {
            SpaceDescriptor::Lagrange { m, degree, .. } => SpaceDescriptor::Lagrange { m, degree, domain },
            SpaceDescriptor::Monomial { n, .. } => SpaceDescriptor::Monomial { n, domain },
        }
    }
}

/// Continuous piecewise polynomials of degree `d` on a structured mesh.
///
/// Degrees of freedom sit on the lattice refined `d` times; the node at
/// refined position `(I, J)` has global index `J (d M + 1) + I`.
#[derive(Clone, Debug)]
pub struct LagrangeSpace {
    mesh: StructuredMesh,
    element: LagrangeElement,
    side: usize,
}

impl LagrangeSpace {
    pub fn new(m: usize, degree: usize, domain: Rect) -> Result<Self> {
        if !(1..=4).contains(&degree) {
            return Err(Error::InvalidSpace(format!(
                "Lagrange degree must be between 1 and 4, got {degree}"
            )));
        }
        let mesh = StructuredMesh::new(m, domain)?;
        Ok(LagrangeSpace {
            mesh,
            element: LagrangeElement::new(degree),
            side: degree * m + 1,
        })
    }

    pub fn mesh(&self) -> &StructuredMesh {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.element.degree()
    }

    pub fn element(&self) -> &LagrangeElement {
        &self.element
    }

    pub fn dof_count(&self) -> usize {
        self.side * self.side
    }

    pub fn local_count(&self) -> usize {
        self.element.node_count()
    }

    pub fn dof_point(&self, dof: usize) -> Point {
        let d = self.degree() as f64;
        let (i, j) = (dof % self.side, dof / self.side);
        self.mesh.lattice_point(i as f64 / d, j as f64 / d)
    }

    /// Global indices of the local nodes of triangle `cell`.
    pub fn local_dofs(&self, cell: usize, out: &mut [usize]) {
        let corners = self.mesh.corners(self.mesh.cell(cell));
        for (o, k) in out.iter_mut().zip(self.element.nodes()) {
            let (mut ii, mut jj) = (0, 0);
            for (km, c) in k.iter().zip(&corners) {
                ii += km * c.0;
                jj += km * c.1;
            }
            *o = jj * self.side + ii;
        }
    }

    /// Barycentric coordinates of `p` with respect to triangle `cell`.
    pub fn barycentric(&self, cell: usize, p: Point) -> [f64; 3] {
        let c = self.mesh.cell(cell);
        let (a, b) = self.mesh.local_coords(c, p);
        match c.half {
            Half::Lower => [1.0 - a, a - b, b],
            Half::Upper => [1.0 - b, a, b - a],
        }
    }

    /// Physical gradients of the barycentric coordinates.
    pub fn lambda_gradients(&self, half: Half) -> [Point; 3] {
        let (ix, iy) = (1.0 / self.mesh.hx(), 1.0 / self.mesh.hy());
        match half {
            Half::Lower => [Point::new(-ix, 0.0), Point::new(ix, -iy), Point::new(0.0, iy)],
            Half::Upper => [Point::new(0.0, -iy), Point::new(ix, 0.0), Point::new(-ix, iy)],
        }
    }

    /// Local basis values at `p`, which must lie in the closed triangle `cell`.
    pub fn local_values(&self, cell: usize, p: Point, out: &mut [f64]) {
        self.element.values(self.barycentric(cell, p), out);
    }

    /// Local basis gradients at `p` in triangle `cell`.
    pub fn local_gradients(&self, cell: usize, p: Point, out: &mut [Point]) {
        let n = self.local_count();
        let mut der = [[0.0; 3]; 15];
        self.element.lambda_derivatives(self.barycentric(cell, p), &mut der[..n]);
        let g = self.lambda_gradients(self.mesh.cell(cell).half);
        for (o, d) in out.iter_mut().zip(&der[..n]) {
            *o = g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
        }
    }

    /// Nodal interpolant of a scalar function.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        (0..self.dof_count()).map(|i| f(self.dof_point(i))).collect()
    }

    /// Value of the finite element function with coefficients `coeffs` at `p`.
    pub fn evaluate(&self, coeffs: &[f64], p: Point) -> f64 {
        let cell = self.mesh.locate(p);
        let n = self.local_count();
        let mut dofs = [0usize; 15];
        let mut vals = [0.0; 15];
        self.local_dofs(cell, &mut dofs[..n]);
        self.local_values(cell, p, &mut vals[..n]);
        dofs[..n].iter().zip(&vals[..n]).map(|(&i, v)| coeffs[i] * v).sum()
    }
}

/// Global monomials `x^m y^n` with `m + n < N`, ordered by total degree and
/// then by increasing power of `y`. For `N = 2` the basis is `{1, x, y}`.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    domain: Rect,
    max_total: usize,
    exponents: Vec<(u32, u32)>,
}

impl MonomialSpace {
    pub fn new(n: usize, domain: Rect) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("monomial space needs N >= 1".into()));
        }
        if !domain.is_valid() {
            return Err(Error::InvalidSpace(format!("degenerate domain {domain:?}")));
        }
        let mut exponents = Vec::with_capacity(n * (n + 1) / 2);
        for total in 0..n as u32 {
            for py in 0..=total {
                exponents.push((total - py, py));
            }
        }
        Ok(MonomialSpace {
            domain,
            max_total: n,
            exponents,
        })
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    /// `N`: every monomial has total degree below this.
    pub fn max_total_degree(&self) -> usize {
        self.max_total
    }

    pub fn dof_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    /// Index of `x^m y^n`, if it belongs to the space.
    pub fn index_of(&self, m: u32, n: u32) -> Option<usize> {
        self.exponents.iter().position(|&e| e == (m, n))
    }

    fn powers(&self, v: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.max_total);
        let mut acc = 1.0;
        for _ in 0..self.max_total {
            p.push(acc);
            acc *= v;
        }
        p
    }

    pub fn values(&self, p: Point, out: &mut [f64]) {
        let (px, py) = (self.powers(p.x), self.powers(p.y));
        for (o, &(m, n)) in out.iter_mut().zip(&self.exponents) {
            *o = px[m as usize] * py[n as usize];
        }
    }

    pub fn gradients(&self, p: Point, out: &mut [Point]) {
        let (px, py) = (self.powers(p.x), self.powers(p.y));
        for (o, &(m, n)) in out.iter_mut().zip(&self.exponents) {
            let (m, n) = (m as usize, n as usize);
            let gx = if m > 0 { m as f64 * px[m - 1] * py[n] } else { 0.0 };
            let gy = if n > 0 { n as f64 * px[m] * py[n - 1] } else { 0.0 };
            *o = Point::new(gx, gy);
        }
    }
}

/// A basis of scalar coefficient functions for test 1-forms.
#[derive(Clone, Debug)]
pub enum FormSpace {
    Lagrange(LagrangeSpace),
    Monomial(MonomialSpace),
}

impl FormSpace {
    pub fn build(desc: &SpaceDescriptor) -> Result<Self> {
        match *desc {
            SpaceDescriptor::Lagrange { m, degree, domain } => {
                Ok(FormSpace::Lagrange(LagrangeSpace::new(m, degree, domain)?))
            }
            SpaceDescriptor::Monomial { n, domain } => Ok(FormSpace::Monomial(MonomialSpace::new(n, domain)?)),
        }
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        match self {
            FormSpace::Lagrange(s) => SpaceDescriptor::Lagrange {
                m: s.mesh.cells_per_side(),
                degree: s.degree(),
                domain: s.mesh.domain(),
            },
            FormSpace::Monomial(s) => SpaceDescriptor::Monomial {
                n: s.max_total,
                domain: s.domain,
            },
        }
    }

    pub fn domain(&self) -> Rect {
        match self {
            FormSpace::Lagrange(s) => s.mesh.domain(),
            FormSpace::Monomial(s) => s.domain,
        }
    }

    pub fn dof_count(&self) -> usize {
        match self {
            FormSpace::Lagrange(s) => s.dof_count(),
            FormSpace::Monomial(s) => s.dof_count(),
        }
    }

    /// Value at `p` of the scalar function with coefficients `coeffs`.
    pub fn evaluate(&self, coeffs: &[f64], p: Point) -> f64 {
        match self {
            FormSpace::Lagrange(s) => s.evaluate(coeffs, p),
            FormSpace::Monomial(s) => {
                let mut v = vec![0.0; s.dof_count()];
                s.values(p, &mut v);
                crate::linalg::dot(&v, coeffs)
            }
        }
    }

    /// Coefficients of the constant function 1.
    pub fn constant_one(&self) -> Vec<f64> {
        match self {
            FormSpace::Lagrange(s) => vec![1.0; s.dof_count()],
            FormSpace::Monomial(s) => {
                let mut c = vec![0.0; s.dof_count()];
                c[0] = 1.0;
                c
            }
        }
    }
}

/// Builds the space named by a descriptor.
pub fn build_space(desc: &SpaceDescriptor) -> Result<FormSpace> {
    FormSpace::build(desc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_counts() {
        let p1 = build_space(&SpaceDescriptor::lagrange(10, 1)).unwrap();
        assert_eq!(p1.dof_count(), 121);
        let p2 = build_space(&SpaceDescriptor::lagrange(10, 2)).unwrap();
        assert_eq!(p2.dof_count(), 441);
        let mono = build_space(&SpaceDescriptor::monomial(10)).unwrap();
        assert_eq!(mono.dof_count(), 55);
        assert!(build_space(&SpaceDescriptor::lagrange(10, 5)).is_err());
        assert!(build_space(&SpaceDescriptor::monomial(0)).is_err());
    }

    #[test]
    fn monomial_ordering() {
        let s = MonomialSpace::new(3, Rect::default()).unwrap();
        assert_eq!(s.exponents(), &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(s.index_of(0, 1), Some(2));
        assert_eq!(s.index_of(3, 0), None);
    }

    #[test]
    fn descriptor_json_round_trip() {
        let text = r#"{"kind":"lagrange","M":10,"degree":1,"domain":[-1,1,-1,1]}"#;
        let d: SpaceDescriptor = serde_json::from_str(text).unwrap();
        assert_eq!(d, SpaceDescriptor::lagrange(10, 1));
        let back = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<SpaceDescriptor>(&back).unwrap(), d);
        let m: SpaceDescriptor = serde_json::from_str(r#"{"kind":"monomial","N":10}"#).unwrap();
        assert_eq!(m, SpaceDescriptor::monomial(10));
        assert_eq!(build_space(&m).unwrap().descriptor(), m);
    }

    #[test]
    fn local_dofs_cover_lattice() {
        for d in 1..=4 {
            let s = LagrangeSpace::new(3, d, Rect::default()).unwrap();
            let mut seen = vec![false; s.dof_count()];
            let mut dofs = vec![0; s.local_count()];
            for cell in 0..s.mesh().triangle_count() {
                s.local_dofs(cell, &mut dofs);
                // each local node sits at its dof point
                let mut vals = vec![0.0; s.local_count()];
                for (k, &g) in dofs.iter().enumerate() {
                    seen[g] = true;
                    s.local_values(cell, s.dof_point(g), &mut vals);
                    assert!((vals[k] - 1.0).abs() < 1e-12);
                }
            }
            assert!(seen.iter().all(|&v| v));
        }
    }

    #[test]
    fn interpolation_is_exact_on_polynomials() {
        for d in 1..=4 {
            let s = LagrangeSpace::new(4, d, Rect::new(-1.0, 1.0, -0.5, 1.5)).unwrap();
            let poly = |p: Point| {
                let mut v = 0.3;
                for k in 1..=d as i32 {
                    v += 0.7 * p.x.powi(k) - 0.2 * p.y.powi(k) + 0.1 * (p.x * p.y).powi(k / 2);
                }
                v
            };
            let coeffs = s.interpolate(poly);
            for p in [Point::new(0.123, 0.777), Point::new(-0.91, -0.44), Point::new(0.5, 1.2)] {
                assert!((s.evaluate(&coeffs, p) - poly(p)).abs() < 1e-11, "d={d}");
            }
        }
    }

    #[test]
    fn gradients_are_continuous_tangentially() {
        // the gradient of x + 2y is constant
        let s = LagrangeSpace::new(5, 3, Rect::default()).unwrap();
        let coeffs = s.interpolate(|p| p.x + 2.0 * p.y);
        let mut dofs = vec![0; s.local_count()];
        let mut g = vec![Point::default(); s.local_count()];
        for cell in [0, 7, 33] {
            let p = s.mesh().triangle_points(cell);
            let c = (p[0] + p[1] + p[2]) * (1.0 / 3.0);
            s.local_dofs(cell, &mut dofs);
            s.local_gradients(cell, c, &mut g);
            let mut sum = Point::default();
            for (i, gi) in dofs.iter().zip(&g) {
                sum += *gi * coeffs[*i];
            }
            assert!((sum.x - 1.0).abs() < 1e-11 && (sum.y - 2.0).abs() < 1e-11);
        }
    }
}
