//! Recovering shapes from currents.
//!
//! On piecewise constant forms the current of a curve records, per triangle,
//! the jump `(dx, dy)` between where the curve enters and where it leaves.
//! The occupied triangles form a cyclic chain, and in each triangle the jump
//! fits between the entry and exit edges in exactly one way. On intervals the
//! moment currents `int y dx`, `int x y dx`, `int y^2 dx` determine
//! progressively higher degree approximations of a graph `y = g(x)`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2, Vector4};
use rayon::prelude::*;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::femspace::StructuredMesh;
use crate::geometry::Point;

/// Per-triangle jumps of a curve, i.e. its current on piecewise constant forms.
#[derive(Clone, Debug)]
pub struct CellJumps {
    mesh: StructuredMesh,
    jumps: Vec<Point>,
}

impl CellJumps {
    pub fn new(mesh: StructuredMesh, jumps: Vec<Point>) -> Result<Self> {
        if jumps.len() != mesh.triangle_count() {
            return Err(Error::Configuration(format!(
                "{} jumps for a mesh with {} triangles",
                jumps.len(),
                mesh.triangle_count()
            )));
        }
        Ok(CellJumps { mesh, jumps })
    }

    /// Exact jumps of a polyline: the sum of its clipped pieces per triangle.
    pub fn from_curve(curve: &SampledCurve, mesh: &StructuredMesh) -> Result<Self> {
        for (index, &p) in curve.points().iter().enumerate() {
            mesh.check_inside(p, index)?;
        }
        let mut jumps = vec![Point::default(); mesh.triangle_count()];
        for (p, q) in curve.segments() {
            for piece in mesh.clip_segment(p, q) {
                jumps[piece.cell] += piece.end - piece.start;
            }
        }
        Ok(CellJumps {
            mesh: mesh.clone(),
            jumps,
        })
    }

    pub fn mesh(&self) -> &StructuredMesh {
        &self.mesh
    }

    pub fn jumps(&self) -> &[Point] {
        &self.jumps
    }

    pub fn jump(&self, cell: usize) -> Point {
        self.jumps[cell]
    }

    pub fn is_occupied(&self, cell: usize) -> bool {
        let j = self.jumps[cell];
        j.x.abs() + j.y.abs() > 1e-10 * self.mesh.diameter()
    }

    pub fn total(&self) -> Point {
        self.jumps.iter().fold(Point::default(), |acc, &j| acc + j)
    }

    /// CSV with header `cell_id,dx,dy`, occupied cells only.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("cell_id,dx,dy\n");
        for (i, j) in self.jumps.iter().enumerate() {
            if self.is_occupied(i) {
                let _ = writeln!(out, "{i},{:.16e},{:.16e}", j.x, j.y);
            }
        }
        out
    }
}

/// The cyclic chain of occupied triangles, ordered along the curve.
///
/// Each occupied triangle must share an edge with exactly two other occupied
/// triangles, and all occupied triangles must form one cycle.
pub fn occupied_cells(jumps: &CellJumps) -> Result<Vec<usize>> {
    let mesh = jumps.mesh();
    let occupied: Vec<usize> = (0..mesh.triangle_count()).filter(|&c| jumps.is_occupied(c)).collect();
    if occupied.is_empty() {
        return Ok(Vec::new());
    }
    let neighbours = |c: usize| -> Vec<usize> {
        (0..3)
            .filter_map(|e| mesh.neighbour(c, e))
            .filter(|&n| jumps.is_occupied(n))
            .collect()
    };
    for &c in &occupied {
        let k = neighbours(c).len();
        if k != 2 {
            return Err(Error::NotInGeneralPosition(format!(
                "triangle {c} has {k} occupied neighbours instead of 2"
            )));
        }
    }
    let start = occupied[0];
    let mut chain = vec![start];
    let mut prev = start;
    let mut cur = neighbours(start)[0];
    while cur != start {
        chain.push(cur);
        let nb = neighbours(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        if chain.len() > occupied.len() {
            return Err(Error::NotInGeneralPosition("occupied triangles do not close up".into()));
        }
    }
    if chain.len() != occupied.len() {
        return Err(Error::NotInGeneralPosition(format!(
            "occupied triangles split into several cycles ({} of {} in the first)",
            chain.len(),
            occupied.len()
        )));
    }
    // Orient the chain along the curve: the jump of the first cell must fit
    // from its entry edge to its exit edge.
    let n = chain.len();
    let entry = mesh.shared_edge(chain[0], chain[n - 1]).expect("chain neighbours share an edge");
    let exit = mesh.shared_edge(chain[0], chain[1]).expect("chain neighbours share an edge");
    let tri = mesh.triangle_points(chain[0]);
    if segment_from_jumps(tri, jumps.jump(chain[0]), entry, exit).is_err() {
        chain[1..].reverse();
    }
    Ok(chain)
}

/// Places the vector `jump` with its tail on edge `entry` and its head on edge
/// `exit` of the triangle (edge `k` runs from vertex `k` to vertex `k + 1`).
pub fn segment_from_jumps(tri: [Point; 3], jump: Point, entry: usize, exit: usize) -> Result<(Point, Point)> {
    const TOL: f64 = 1e-9;
    if jump.x == 0.0 && jump.y == 0.0 {
        return Err(Error::InconsistentJumps("zero jump has no placement".into()));
    }
    if entry > 2 || exit > 2 || entry == exit {
        return Err(Error::InconsistentJumps(format!(
            "entry edge {entry} and exit edge {exit} must be distinct edges of the triangle"
        )));
    }
    let (a0, a1) = (tri[entry], tri[(entry + 1) % 3]);
    let (b0, b1) = (tri[exit], tri[(exit + 1) % 3]);
    let (ea, eb) = (a1 - a0, b1 - b0);
    // b0 + t eb - (a0 + s ea) = jump
    let m = Matrix2::new(-ea.x, eb.x, -ea.y, eb.y);
    let rhs = jump - (b0 - a0);
    let sol = m
        .lu()
        .solve(&Vector2::new(rhs.x, rhs.y))
        .ok_or_else(|| Error::InconsistentJumps("entry and exit edges are parallel".into()))?;
    let (s, t) = (sol[0], sol[1]);
    if !(-TOL..=1.0 + TOL).contains(&s) || !(-TOL..=1.0 + TOL).contains(&t) {
        return Err(Error::InconsistentJumps(format!(
            "jump ({}, {}) does not fit from edge {entry} to edge {exit} (s = {s}, t = {t})",
            jump.x, jump.y
        )));
    }
    let (s, t) = (s.clamp(0.0, 1.0), t.clamp(0.0, 1.0));
    Ok((a0 + ea * s, b0 + eb * t))
}

/// Every placement of `jump` through the triangle with its ends on two
/// different sides, as `(entry, exit, tail, head)`. There are at most two, and
/// one when the jump is parallel to a side. Segments lying along a side are
/// not placements.
pub fn jump_placements(tri: [Point; 3], jump: Point) -> Vec<(usize, usize, Point, Point)> {
    let mut out = Vec::new();
    for entry in 0..3 {
        for exit in 0..3 {
            if entry != exit {
                if let Ok((p, q)) = segment_from_jumps(tri, jump, entry, exit) {
                    let along_side = (0..3).any(|k| {
                        let (a, b) = (tri[k], tri[(k + 1) % 3]);
                        point_segment_distance(p, a, b) < 1e-12 && point_segment_distance(q, a, b) < 1e-12
                    });
                    if along_side {
                        continue;
                    }
                    // a placement through a vertex is found from both adjacent edges
                    if !out.iter().any(|&(_, _, op, oq): &(usize, usize, Point, Point)| {
                        op.distance(p) < 1e-12 && oq.distance(q) < 1e-12
                    }) {
                        out.push((entry, exit, p, q));
                    }
                }
            }
        }
    }
    out
}

/// A closed polyline through the recovered edge crossings.
#[derive(Clone, Debug)]
pub struct ReconstructedCurve {
    /// Occupied triangles in curve order.
    pub cells: Vec<usize>,
    /// `crossings[k]` is where the curve leaves `cells[k]`.
    pub crossings: Vec<Point>,
    /// Largest mismatch between the exit point of one cell and the entry point
    /// of the next before they were averaged.
    pub max_mismatch: f64,
}

impl ReconstructedCurve {
    pub fn to_curve(&self) -> Result<SampledCurve> {
        SampledCurve::closed_from_points(self.crossings.clone())
    }
}

/// Piecewise linear reconstruction from jumps on piecewise constants.
pub fn reconstruct_pc(jumps: &CellJumps) -> Result<ReconstructedCurve> {
    let chain = occupied_cells(jumps)?;
    let n = chain.len();
    if n == 0 {
        return Ok(ReconstructedCurve {
            cells: chain,
            crossings: Vec::new(),
            max_mismatch: 0.0,
        });
    }
    let mesh = jumps.mesh();
    let segments: Vec<(Point, Point)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let cell = chain[k];
            let prev = chain[(k + n - 1) % n];
            let next = chain[(k + 1) % n];
            let entry = mesh.shared_edge(cell, prev).expect("chain neighbours share an edge");
            let exit = mesh.shared_edge(cell, next).expect("chain neighbours share an edge");
            segment_from_jumps(mesh.triangle_points(cell), jumps.jump(cell), entry, exit)
        })
        .collect::<Result<_>>()?;
    let mut crossings = Vec::with_capacity(n);
    let mut max_mismatch: f64 = 0.0;
    for k in 0..n {
        let out = segments[k].1;
        let inn = segments[(k + 1) % n].0;
        max_mismatch = max_mismatch.max(out.distance(inn));
        crossings.push(out.midpoint(inn));
    }
    Ok(ReconstructedCurve {
        cells: chain,
        crossings,
        max_mismatch,
    })
}

/// `max_s min_t |phi(t) - phihat(s)|` with `phihat` the closed polyline
/// `approx` sampled `per_edge` times per edge and `phi` the reference polyline.
pub fn one_sided_hausdorff(approx: &[Point], reference: &SampledCurve, per_edge: usize) -> f64 {
    let refs: Vec<(Point, Point)> = reference.segments().collect();
    let n = approx.len();
    (0..n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (approx[k], approx[(k + 1) % n]);
            let mut worst: f64 = 0.0;
            for i in 0..per_edge.max(1) {
                let p = a.lerp(b, i as f64 / per_edge.max(1) as f64);
                let d = refs
                    .iter()
                    .map(|&(u, v)| point_segment_distance(p, u, v))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    let t = if len2 > 0.0 { ((p - a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + d * t)
}

/// Moment data of a graph `y = g(x)` over `[0, h]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalMoments {
    pub h: f64,
    pub g0: f64,
    pub gh: f64,
    /// `int g`.
    pub i0: f64,
    /// `int x g`.
    pub i1: f64,
    /// `int g^2`.
    pub i2: f64,
}

impl IntervalMoments {
    /// Moments of `g` computed with a 20-point Gauss–Legendre rule.
    pub fn of(g: impl Fn(f64) -> f64, h: f64) -> Self {
        let rule = crate::quadrature::gauss_legendre_on(20, 0.0, h);
        let (mut i0, mut i1, mut i2) = (0.0, 0.0, 0.0);
        for &(x, w) in &rule {
            let v = g(x);
            i0 += w * v;
            i1 += w * x * v;
            i2 += w * v * v;
        }
        IntervalMoments {
            h,
            g0: g(0.0),
            gh: g(h),
            i0,
            i1,
            i2,
        }
    }
}

/// Polynomial in monomial form, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `int_0^h x^k p(x) dx`.
    pub fn moment(&self, k: usize, h: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, c)| c * h.powi((j + k + 1) as i32) / (j + k + 1) as f64)
            .sum()
    }

    /// `int_0^h p(x) q(x) dx`.
    pub fn inner(&self, other: &Poly, h: f64) -> f64 {
        let mut s = 0.0;
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                s += a * b * h.powi((i + j + 1) as i32) / (i + j + 1) as f64;
            }
        }
        s
    }

    pub fn max_error(&self, g: impl Fn(f64) -> f64, h: f64, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| {
                let x = h * i as f64 / samples as f64;
                (g(x) - self.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The coefficient `a0` of `x (h - x)` that makes
/// `g0 (h - x) / h + gh x / h + a0 x (h - x)` integrate to `integral` over `[0, h]`.
pub fn quadratic_correction(g0: f64, gh: f64, integral: f64, h: f64) -> f64 {
    assert!(h > 0.0, "interval width must be positive");
    6.0 / (h * h * h) * (integral - h * (g0 + gh) / 2.0)
}

/// The quadratic interpolating the endpoints with the given integral.
pub fn quadratic_reconstruct(m: &IntervalMoments) -> Poly {
    let h = m.h;
    let a0 = quadratic_correction(m.g0, m.gh, m.i0, h);
    Poly(vec![m.g0, (m.gh - m.g0) / h + a0 * h, -a0])
}

/// The unique cubic interpolating the endpoints with the given `int g` and `int x g`.
pub fn cubic_reconstruct(m: &IntervalMoments) -> Poly {
    let h = m.h;
    let mut a = Matrix4::zeros();
    for j in 0..4 {
        a[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
        a[(1, j)] = h.powi(j as i32);
        a[(2, j)] = h.powi(j as i32 + 1) / (j + 1) as f64;
        a[(3, j)] = h.powi(j as i32 + 2) / (j + 2) as f64;
    }
    let b = Vector4::new(m.g0, m.gh, m.i0, m.i1);
    let c = a.lu().solve(&b).expect("cubic moment system is nonsingular for h > 0");
    Poly(c.iter().copied().collect())
}

/// Result of the quartic fit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticFit {
    pub poly: Poly,
    /// Both real solutions, the selected one first; empty on fallback.
    pub solutions: Vec<Poly>,
    /// True when the moment equations had no real solution and the cubic was returned.
    pub fell_back: bool,
}

/// Quartic matching the endpoints and `int g`, `int x g`, `int g^2`.
///
/// Quartics matching the four linear conditions form the line `c + lambda p`
/// with `c` the cubic fit and `p(x) = x (h - x) (x^2 - h x + h^2 / 5)`,
/// orthogonal to `1` and `x`. The condition on `int g^2` is quadratic in
/// `lambda`; of its real roots, the one closer to the cubic is selected.
pub fn quartic_reconstruct(m: &IntervalMoments) -> QuarticFit {
    let h = m.h;
    let cubic = cubic_reconstruct(m);
    // x (h - x) (x^2 - h x + h^2/5) expanded
    let p = Poly(vec![0.0, h * h * h / 5.0, -6.0 * h * h / 5.0, 2.0 * h, -1.0]);
    let qa = p.inner(&p, h);
    let qb = 2.0 * cubic.inner(&p, h);
    let qc = cubic.inner(&cubic, h) - m.i2;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return QuarticFit {
            poly: cubic,
            solutions: Vec::new(),
            fell_back: true,
        };
    }
    let sq = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let mut roots = if q != 0.0 { vec![q / qa, qc / q] } else { vec![0.0, 0.0] };
    roots.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let combine = |lambda: f64| {
        let mut c = cubic.0.clone();
        c.resize(5, 0.0);
        Poly(c.iter().zip(&p.0).map(|(a, b)| a + lambda * b).collect())
    };
    let solutions: Vec<Poly> = roots.iter().map(|&l| combine(l)).collect();
    QuarticFit {
        poly: solutions[0].clone(),
        solutions,
        fell_back: false,
    }
}

/// Recovers `count` points on a line from their power sums
/// `moments[k - 1] = sum_j x_j^k`, `k = 1..=d`, `count <= d`.
///
/// Newton's identities turn the first `count` power sums into elementary
/// symmetric polynomials; the points are the roots of the resulting monic
/// polynomial, found as companion matrix eigenvalues. The roots must be real
/// and reproduce all given moments to `1e-8` relative to their scale.
pub fn recover_points_from_moments(moments: &[f64], count: usize) -> Result<Vec<f64>> {
    if count > moments.len() {
        return Err(Error::InconsistentMoments(format!(
            "{count} points need at least {count} moments, got {}",
            moments.len()
        )));
    }
    if count == 0 {
        return if moments.iter().all(|&m| m.abs() < 1e-8) {
            Ok(Vec::new())
        } else {
            Err(Error::InconsistentMoments("nonzero moments for zero points".into()))
        };
    }
    // e[0] = 1, k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![1.0];
    for k in 1..=count {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * moments[i - 1];
        }
        e.push(s / k as f64);
    }
    // x^n - e1 x^{n-1} + e2 x^{n-2} - ... ; companion matrix of the monic polynomial
    let n = count;
    let coeff = |k: usize| if k % 2 == 0 { e[k] } else { -e[k] };
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for k in 1..=n {
        // coefficient of x^{n-k} is coeff(k); last column holds -a_{j}
        comp[(n - k, n - 1)] = -coeff(k);
    }
    let eig = comp.complex_eigenvalues();
    let mut roots: Vec<f64> = eig.iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    for (k, &m) in moments.iter().enumerate() {
        let pk: f64 = roots.iter().map(|r| r.powi(k as i32 + 1)).sum();
        let scale = roots.iter().map(|r| r.abs().powi(k as i32 + 1)).sum::<f64>().max(1.0);
        if (pk - m).abs() > 1e-8 * scale {
            return Err(Error::InconsistentMoments(format!(
                "moment {} is {m} but the recovered points give {pk}",
                k + 1
            )));
        }
    }
    Ok(roots)
}

/// Power sums `sum_j x_j^k` for `k = 1..=d`.
pub fn power_sums(points: &[f64], d: usize) -> Vec<f64> {
    (1..=d).map(|k| points.iter().map(|x| x.powi(k as i32)).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{circle, straight_segment};
    use crate::geometry::Rect;

    fn unit_triangle() -> [Point; 3] {
        [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]
    }

    #[test]
    fn placement_example() {
        // bottom edge is 0, hypotenuse is 1
        let (p, q) = segment_from_jumps(unit_triangle(), Point::new(0.5, 0.25), 0, 1).unwrap();
        assert!(p.distance(Point::new(0.25, 0.0)) < 1e-14);
        assert!(q.distance(Point::new(0.75, 0.25)) < 1e-14);
        assert!(segment_from_jumps(unit_triangle(), Point::new(0.0, 0.0), 0, 1).is_err());
        assert!(segment_from_jumps(unit_triangle(), Point::new(3.0, 0.0), 0, 1).is_err());
    }

    #[test]
    fn at_most_two_placements_and_one_when_parallel() {
        let tri = unit_triangle();
        for jump in [Point::new(0.3, 0.2), Point::new(-0.1, 0.4), Point::new(0.2, -0.25)] {
            let n = jump_placements(tri, jump).len();
            assert!((1..=2).contains(&n), "{jump:?}: {n}");
        }
        // parallel to the bottom side
        let ps = jump_placements(tri, Point::new(0.5, 0.0));
        assert_eq!(ps.len(), 1);
        assert!((ps[0].2.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circle_chain_is_one_cycle() {
        let mesh = StructuredMesh::new(10, Rect::default()).unwrap();
        let c = circle(0.5, 2000).unwrap();
        let j = CellJumps::from_curve(&c, &mesh).unwrap();
        let t = j.total();
        assert!(t.x.abs() < 1e-12 && t.y.abs() < 1e-12);
        let chain = occupied_cells(&j).unwrap();
        assert!(chain.len() > 20);
        for k in 0..chain.len() {
            assert!(mesh.shared_edge(chain[k], chain[(k + 1) % chain.len()]).is_some());
        }
        let empty = CellJumps::new(mesh.clone(), vec![Point::default(); mesh.triangle_count()]).unwrap();
        assert!(occupied_cells(&empty).unwrap().is_empty());
    }

    #[test]
    fn figure_eight_on_coarse_mesh_is_rejected() {
        let mesh = StructuredMesh::new(4, Rect::default()).unwrap();
        let c = crate::curve::bowtie(400).unwrap();
        let j = CellJumps::from_curve(&c, &mesh).unwrap();
        assert!(matches!(occupied_cells(&j), Err(Error::NotInGeneralPosition(_))));
    }

    #[test]
    fn polygon_inscribed_on_edges_is_recovered_exactly() {
        // corners on grid lines the curve crosses: straight inside every triangle
        let mesh = StructuredMesh::new(8, Rect::default()).unwrap();
        let c = SampledCurve::closed_from_points(vec![
            Point::new(0.6, 0.0),
            Point::new(0.0, 0.6),
            Point::new(-0.6, 0.0),
            Point::new(0.0, -0.6),
        ])
        .unwrap();
        let j = CellJumps::from_curve(&c, &mesh).unwrap();
        let rec = reconstruct_pc(&j).unwrap();
        assert!(rec.max_mismatch < 1e-12);
        let err = one_sided_hausdorff(&rec.crossings, &c, 8);
        assert!(err < 1e-12, "{err}");
        // orientation follows the curve
        let r = rec.to_curve().unwrap();
        assert!(r.signed_area() > 0.0);
    }

    #[test]
    fn straight_line_loop_through_one_cell() {
        let mesh = StructuredMesh::new(1, Rect::new(0.0, 1.0, 0.0, 1.0)).unwrap();
        let seg = straight_segment(Point::new(0.25, 0.0), Point::new(1.0, 0.5), 2).unwrap();
        let j = CellJumps::from_curve(&seg, &mesh).unwrap();
        let tri = mesh.triangle_points(0);
        let (p, q) = segment_from_jumps(tri, j.jump(0), 0, 1).unwrap();
        assert!(p.distance(Point::new(0.25, 0.0)) < 1e-14 && q.distance(Point::new(1.0, 0.5)) < 1e-14);
    }

    #[test]
    fn quadratic_correction_examples() {
        let h = 0.7;
        assert_eq!(quadratic_correction(1.0, 3.0, h * 2.0, h), 0.0);
        let a0 = quadratic_correction(0.0, 0.0, h * h * h / 6.0, h);
        assert!((a0 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn reconstructions_exact_on_own_degree() {
        let h = 0.37;
        let q = |x: f64| 0.2 - 1.3 * x + 2.1 * x * x;
        let p = quadratic_reconstruct(&IntervalMoments::of(q, h));
        assert!(p.max_error(q, h, 50) < 1e-12);
        let c = |x: f64| 0.1 + x - 0.5 * x * x + 3.0 * x * x * x;
        let p = cubic_reconstruct(&IntervalMoments::of(c, h));
        assert!(p.max_error(c, h, 50) < 1e-12);
        let g = |x: f64| 0.3 + 0.5 * x - x * x + 0.4 * x.powi(3) + 2.0 * x.powi(4);
        let fit = quartic_reconstruct(&IntervalMoments::of(g, 1.0));
        assert!(!fit.fell_back);
        assert!(fit.solutions.iter().any(|s| s.max_error(g, 1.0, 50) < 1e-8));
    }

    #[test]
    fn error_constants() {
        let m3 = IntervalMoments::of(|x| x.powi(3), 1.0);
        assert!(quadratic_reconstruct(&m3).max_error(|x| x.powi(3), 1.0, 2000) <= 0.009 * 6.0);
        let m4 = IntervalMoments::of(|x| x.powi(4), 1.0);
        assert!(cubic_reconstruct(&m4).max_error(|x| x.powi(4), 1.0, 2000) <= 0.001 * 24.0);
        let m5 = IntervalMoments::of(|x| x.powi(5), 1.0);
        let fit = quartic_reconstruct(&m5);
        assert!(fit.poly.max_error(|x| x.powi(5), 1.0, 2000) <= 1e-4 * 120.0);
    }

    #[test]
    fn quartic_falls_back_on_noisy_moments() {
        let mut m = IntervalMoments::of(|x| 0.5 * x * (1.0 - x), 1.0);
        m.i2 -= 1e-3;
        let fit = quartic_reconstruct(&m);
        assert!(fit.fell_back);
        assert_eq!(fit.poly, cubic_reconstruct(&m));
    }

    #[test]
    fn points_from_moments_examples() {
        assert_eq!(recover_points_from_moments(&[0.37], 1).unwrap(), vec![0.37]);
        let r = recover_points_from_moments(&[0.5, 0.25], 2).unwrap();
        assert!(r[0].abs() < 1e-12 && (r[1] - 0.5).abs() < 1e-12);
        let r = recover_points_from_moments(&power_sums(&[0.2, 0.2], 3), 2).unwrap();
        assert!((r[0] - 0.2).abs() < 1e-7 && (r[1] - 0.2).abs() < 1e-7);
        // moments of no real configuration: x1 + x2 = 0, x1^2 + x2^2 = -2
        assert!(matches!(
            recover_points_from_moments(&[0.0, -2.0], 2),
            Err(Error::InconsistentMoments(_))
        ));
        // extra moment inconsistent with the recovered points
        assert!(recover_points_from_moments(&[0.5, 0.25, 1.0], 2).is_err());
    }
}
