//! Lagrange elements of degree 1 to 4 on a triangle, in barycentric form.
//!
//! The node with barycentric multi-index `(k0, k1, k2)`, `k0 + k1 + k2 = d`,
//! carries the basis function `P_{k0}(l0) P_{k1}(l1) P_{k2}(l2)` where
//! `P_a(l) = prod_{m < a} (d l - m) / (m + 1)`.

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangeElement {
    degree: usize,
    nodes: Vec<[usize; 3]>,
}

impl LagrangeElement {
    pub fn new(degree: usize) -> Self {
        assert!((1..=4).contains(&degree), "Lagrange degree must be 1..=4");
        let mut nodes = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
        for k2 in 0..=degree {
            for k1 in 0..=degree - k2 {
                nodes.push([degree - k1 - k2, k1, k2]);
            }
        }
        LagrangeElement { degree, nodes }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Barycentric multi-indices of the local nodes.
    pub fn nodes(&self) -> &[[usize; 3]] {
        &self.nodes
    }

    fn factor(&self, a: usize, l: f64) -> (f64, f64) {
        let d = self.degree as f64;
        let (mut v, mut dv) = (1.0, 0.0);
        for m in 0..a {
            let c = 1.0 / (m as f64 + 1.0);
            let f = (d * l - m as f64) * c;
            dv = dv * f + v * d * c;
            v *= f;
        }
        (v, dv)
    }

    /// Basis values at barycentric coordinates `l`.
    pub fn values(&self, l: [f64; 3], out: &mut [f64]) {
        let tables = self.tables(l);
        for (o, k) in out.iter_mut().zip(&self.nodes) {
            *o = tables[0][k[0]].0 * tables[1][k[1]].0 * tables[2][k[2]].0;
        }
    }

    /// Partial derivatives of each basis function with respect to the three
    /// barycentric coordinates, treated as independent variables.
    pub fn lambda_derivatives(&self, l: [f64; 3], out: &mut [[f64; 3]]) {
        let t = self.tables(l);
        for (o, k) in out.iter_mut().zip(&self.nodes) {
            let (a, b, c) = (t[0][k[0]], t[1][k[1]], t[2][k[2]]);
            *o = [a.1 * b.0 * c.0, a.0 * b.1 * c.0, a.0 * b.0 * c.1];
        }
    }

    fn tables(&self, l: [f64; 3]) -> [[(f64, f64); 5]; 3] {
        let mut t = [[(0.0, 0.0); 5]; 3];
        for (row, &lm) in t.iter_mut().zip(&l) {
            for (a, slot) in row.iter_mut().enumerate().take(self.degree + 1) {
                *slot = self.factor(a, lm);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        for d in 1..=4 {
            assert_eq!(LagrangeElement::new(d).node_count(), (d + 1) * (d + 2) / 2);
        }
    }

    #[test]
    fn nodal_property_and_partition_of_unity() {
        for d in 1..=4 {
            let el = LagrangeElement::new(d);
            let n = el.node_count();
            let mut vals = vec![0.0; n];
            for (i, k) in el.nodes().iter().enumerate() {
                let l = k.map(|v| v as f64 / d as f64);
                el.values(l, &mut vals);
                for (j, v) in vals.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-13, "d={d} node {i} basis {j}: {v}");
                }
            }
            let l = [0.21, 0.37, 0.42];
            el.values(l, &mut vals);
            assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            // derivative along any direction tangent to the simplex sums to zero
            let mut der = vec![[0.0; 3]; n];
            el.lambda_derivatives(l, &mut der);
            let dir = [0.3, -0.5, 0.2];
            let s: f64 = der.iter().map(|g| g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2]).sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let el = LagrangeElement::new(4);
        let n = el.node_count();
        let l = [0.15, 0.6, 0.25];
        let mut der = vec![[0.0; 3]; n];
        el.lambda_derivatives(l, &mut der);
        let h = 1e-6;
        for m in 0..3 {
            let mut lp = l;
            let mut lm = l;
            lp[m] += h;
            lm[m] -= h;
            let mut vp = vec![0.0; n];
            let mut vm = vec![0.0; n];
            el.values(lp, &mut vp);
            el.values(lm, &mut vm);
            for i in 0..n {
                let fd = (vp[i] - vm[i]) / (2.0 * h);
                assert!((fd - der[i][m]).abs() < 1e-6, "basis {i} coord {m}");
            }
        }
    }
}
