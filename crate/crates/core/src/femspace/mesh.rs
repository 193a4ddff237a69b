//! Structured triangulation of a rectangle and exact segment clipping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

/// Which half of a grid square a triangle is. Every square is split along the
/// diagonal from its lower-left to its upper-right corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Half {
    /// Vertices `(i, j)`, `(i+1, j)`, `(i+1, j+1)`.
    Lower,
    /// Vertices `(i, j)`, `(i+1, j+1)`, `(i, j+1)`.
    Upper,
}

/// A triangle identified by its grid square and half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub half: Half,
}

/// A piece of a segment lying inside one triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClippedPiece {
    pub cell: usize,
    pub start: Point,
    pub end: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructuredMesh {
    domain: Rect,
    m: usize,
}

/// Grid coordinates closer than this (in cell units) to a grid line count as on it.
const SNAP: f64 = 1e-12;

impl StructuredMesh {
    pub fn new(m: usize, domain: Rect) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpace("mesh needs at least one cell per side".into()));
        }
        if !domain.is_valid() {
            return Err(Error::InvalidSpace(format!("degenerate domain {domain:?}")));
        }
        Ok(StructuredMesh { domain, m })
    }

    pub fn cells_per_side(&self) -> usize {
        self.m
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn hx(&self) -> f64 {
        self.domain.width() / self.m as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.height() / self.m as f64
    }

    /// Longest triangle edge (the diagonal).
    pub fn diameter(&self) -> f64 {
        self.hx().hypot(self.hy())
    }

    pub fn triangle_count(&self) -> usize {
        2 * self.m * self.m
    }

    pub fn vertex_count(&self) -> usize {
        (self.m + 1) * (self.m + 1)
    }

    pub fn vertex(&self, index: usize) -> Point {
        let i = index % (self.m + 1);
        let j = index / (self.m + 1);
        self.lattice_point(i as f64, j as f64)
    }

    pub(crate) fn lattice_point(&self, u: f64, v: f64) -> Point {
        Point::new(self.domain.x0 + u * self.hx(), self.domain.y0 + v * self.hy())
    }

    pub fn cell_id(&self, cell: Cell) -> usize {
        2 * (cell.j * self.m + cell.i) + usize::from(cell.half == Half::Upper)
    }

    pub fn cell(&self, id: usize) -> Cell {
        let sq = id / 2;
        Cell {
            i: sq % self.m,
            j: sq / self.m,
            half: if id % 2 == 0 { Half::Lower } else { Half::Upper },
        }
    }

    /// Corner lattice coordinates of a triangle, counterclockwise.
    pub fn corners(&self, cell: Cell) -> [(usize, usize); 3] {
        let (i, j) = (cell.i, cell.j);
        match cell.half {
            Half::Lower => [(i, j), (i + 1, j), (i + 1, j + 1)],
            Half::Upper => [(i, j), (i + 1, j + 1), (i, j + 1)],
        }
    }

    pub fn triangle_vertices(&self, id: usize) -> [usize; 3] {
        self.corners(self.cell(id)).map(|(i, j)| j * (self.m + 1) + i)
    }

    pub fn triangle_points(&self, id: usize) -> [Point; 3] {
        self.corners(self.cell(id))
            .map(|(i, j)| self.lattice_point(i as f64, j as f64))
    }

    pub fn triangle_area(&self) -> f64 {
        0.5 * self.hx() * self.hy()
    }

    /// Neighbour across local edge `k` (from corner `k` to corner `k + 1`).
    pub fn neighbour(&self, id: usize, edge: usize) -> Option<usize> {
        let c = self.cell(id);
        let m = self.m;
        let (i, j) = (c.i, c.j);
        let other = match (c.half, edge) {
            (Half::Lower, 0) => (j > 0).then(|| Cell { i, j: j - 1, half: Half::Upper }),
            (Half::Lower, 1) => (i + 1 < m).then(|| Cell { i: i + 1, j, half: Half::Upper }),
            (Half::Lower, 2) => Some(Cell { i, j, half: Half::Upper }),
            (Half::Upper, 0) => Some(Cell { i, j, half: Half::Lower }),
            (Half::Upper, 1) => (j + 1 < m).then(|| Cell { i, j: j + 1, half: Half::Lower }),
            (Half::Upper, 2) => (i > 0).then(|| Cell { i: i - 1, j, half: Half::Lower }),
            _ => panic!("triangle edge index {edge} out of range"),
        };
        other.map(|c| self.cell_id(c))
    }

    /// Local edge of `id` shared with `other`, if they are edge neighbours.
    pub fn shared_edge(&self, id: usize, other: usize) -> Option<usize> {
        (0..3).find(|&e| self.neighbour(id, e) == Some(other))
    }

    /// Continuous grid coordinates of a point.
    pub fn grid_coords(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.domain.x0) / self.hx(),
            (p.y - self.domain.y0) / self.hy(),
        )
    }

    fn snapped_index(&self, u: f64) -> usize {
        // Points on a grid line belong to the cell to their left (below).
        let r = u.round();
        let k = if (u - r).abs() < SNAP { r - 1.0 } else { u.floor() };
        (k.max(0.0) as usize).min(self.m - 1)
    }

    /// Triangle containing `p`. Points on shared edges go to the left or
    /// lower cell; points on a square's diagonal go to its lower half.
    pub fn locate(&self, p: Point) -> usize {
        let (u, v) = self.grid_coords(p);
        let i = self.snapped_index(u);
        let j = self.snapped_index(v);
        let (a, b) = (u - i as f64, v - j as f64);
        let half = if a - b >= -SNAP { Half::Lower } else { Half::Upper };
        self.cell_id(Cell { i, j, half })
    }

    /// Local coordinates `(a, b)` of `p` within grid square `(i, j)`.
    pub fn local_coords(&self, cell: Cell, p: Point) -> (f64, f64) {
        let (u, v) = self.grid_coords(p);
        (u - cell.i as f64, v - cell.j as f64)
    }

    pub fn check_inside(&self, p: Point, index: usize) -> Result<()> {
        if self.domain.contains(p) {
            Ok(())
        } else {
            let d = self.domain;
            Err(Error::OutOfDomain {
                index,
                x: p.x,
                y: p.y,
                x0: d.x0,
                x1: d.x1,
                y0: d.y0,
                y1: d.y1,
            })
        }
    }

    /// Splits the segment `[p, q]` at every grid line and diagonal it crosses.
    /// The pieces partition the segment in order, and each lies in one
    /// closed triangle.
    pub fn clip_segment(&self, p: Point, q: Point) -> Vec<ClippedPiece> {
        let mut ts = Vec::with_capacity(8);
        self.crossings(p, q, &mut ts);
        let mut out = Vec::with_capacity(ts.len() + 1);
        let mut prev_t = 0.0;
        let mut prev = p;
        for &t in ts.iter().chain(std::iter::once(&1.0)) {
            if t - prev_t <= 1e-14 {
                continue;
            }
            let next = if t == 1.0 { q } else { p.lerp(q, t) };
            let cell = self.locate(prev.midpoint(next));
            out.push(ClippedPiece {
                cell,
                start: prev,
                end: next,
            });
            prev_t = t;
            prev = next;
        }
        if out.is_empty() {
            // degenerate (zero-length) segment
            out.push(ClippedPiece {
                cell: self.locate(p),
                start: p,
                end: q,
            });
        }
        out
    }

    /// Sorted parameters in `(0, 1)` where `[p, q]` crosses a mesh line.
    fn crossings(&self, p: Point, q: Point, ts: &mut Vec<f64>) {
        let (up, vp) = self.grid_coords(p);
        let (uq, vq) = self.grid_coords(q);
        let mut add_family = |a: f64, b: f64| {
            if (b - a).abs() < 1e-15 {
                return;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut k = lo.floor() + 1.0;
            while k < hi {
                let t = (k - a) / (b - a);
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
                k += 1.0;
            }
        };
        add_family(up, uq);
        add_family(vp, vq);
        add_family(vp - up, vq - uq);
        ts.sort_by(f64::total_cmp);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> Rect {
        Rect::symmetric_unit()
    }

    #[test]
    fn counts_and_area() {
        let m1 = StructuredMesh::new(1, unit()).unwrap();
        assert_eq!(m1.triangle_count(), 2);
        assert_abs_diff_eq!(m1.triangle_area() * m1.triangle_count() as f64, 4.0);
        let m10 = StructuredMesh::new(10, unit()).unwrap();
        assert_eq!(m10.triangle_count(), 200);
        assert_eq!(m10.vertex_count(), 121);
        for idx in 0..m10.vertex_count() {
            let v = m10.vertex(idx);
            let kx = (v.x + 1.0) / 0.2;
            let ky = (v.y + 1.0) / 0.2;
            assert_abs_diff_eq!(kx, kx.round(), epsilon = 1e-12);
            assert_abs_diff_eq!(ky, ky.round(), epsilon = 1e-12);
        }
        assert!(StructuredMesh::new(0, unit()).is_err());
    }

    #[test]
    fn triangles_positively_oriented() {
        let mesh = StructuredMesh::new(4, Rect::new(0.0, 2.0, -1.0, 0.5)).unwrap();
        let mut total = 0.0;
        for id in 0..mesh.triangle_count() {
            let [a, b, c] = mesh.triangle_points(id);
            let area = 0.5 * (b - a).cross(c - a);
            assert!(area > 0.0);
            total += area;
        }
        assert_abs_diff_eq!(total, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn edges_shared_by_two_triangles() {
        let mesh = StructuredMesh::new(5, unit()).unwrap();
        let mut interior = 0;
        let mut boundary = 0;
        for id in 0..mesh.triangle_count() {
            for e in 0..3 {
                match mesh.neighbour(id, e) {
                    Some(o) => {
                        interior += 1;
                        let back = mesh.shared_edge(o, id).expect("neighbour relation symmetric");
                        assert_eq!(mesh.neighbour(o, back), Some(id));
                        // same geometric edge
                        let pa = mesh.triangle_points(id);
                        let pb = mesh.triangle_points(o);
                        let ea = [pa[e], pa[(e + 1) % 3]];
                        let eb = [pb[(back + 1) % 3], pb[back]];
                        assert_eq!(ea, eb);
                    }
                    None => boundary += 1,
                }
            }
        }
        // each interior edge counted twice
        assert_eq!(boundary, 4 * 5);
        assert_eq!(interior / 2, 3 * 25 - 2 * 5);
    }

    #[test]
    fn refinement_nests_vertices() {
        let coarse = StructuredMesh::new(6, unit()).unwrap();
        let fine = StructuredMesh::new(12, unit()).unwrap();
        for idx in 0..coarse.vertex_count() {
            let v = coarse.vertex(idx);
            let (u, w) = fine.grid_coords(v);
            assert_abs_diff_eq!(u, u.round(), epsilon = 1e-12);
            assert_abs_diff_eq!(w, w.round(), epsilon = 1e-12);
        }
    }

    #[test]
    fn clip_within_one_triangle() {
        let mesh = StructuredMesh::new(10, unit()).unwrap();
        let p = Point::new(0.05, 0.01);
        let q = Point::new(0.15, 0.02);
        let pieces = mesh.clip_segment(p, q);
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].start, p);
        assert_eq!(pieces[0].end, q);
    }

    #[test]
    fn clip_across_vertical_line() {
        let mesh = StructuredMesh::new(2, unit()).unwrap();
        // horizontal, lower half of squares, crossing x = 0
        let p = Point::new(-0.5, -0.9);
        let q = Point::new(0.5, -0.9);
        let pieces = mesh.clip_segment(p, q);
        let total: f64 = pieces.iter().map(|c| c.start.distance(c.end)).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        // the diagonal of each square is crossed too
        assert!(pieces.len() >= 2);
        assert!(pieces.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn clip_lengths_sum_and_pieces_inside_cells() {
        let mesh = StructuredMesh::new(17, unit()).unwrap();
        let segs = [
            (Point::new(-0.93, -0.41), Point::new(0.87, 0.66)),
            (Point::new(0.3, 0.9), Point::new(-0.2, -0.95)),
            (Point::new(-1.0, -1.0), Point::new(1.0, 1.0)),
        ];
        for (p, q) in segs {
            let pieces = mesh.clip_segment(p, q);
            let total: f64 = pieces.iter().map(|c| c.start.distance(c.end)).sum();
            assert_abs_diff_eq!(total, p.distance(q), epsilon = 1e-12);
            for piece in &pieces {
                let [a, b, c] = mesh.triangle_points(piece.cell);
                for pt in [piece.start, piece.end, piece.start.midpoint(piece.end)] {
                    let l1 = (c - b).cross(pt - b);
                    let l2 = (a - c).cross(pt - c);
                    let l0 = (b - a).cross(pt - a);
                    let scale = mesh.triangle_area();
                    assert!(l0 > -1e-9 * scale && l1 > -1e-9 * scale && l2 > -1e-9 * scale);
                }
            }
        }
    }

    #[test]
    fn segment_on_shared_edge_goes_to_left_cell() {
        let mesh = StructuredMesh::new(4, unit()).unwrap();
        // along the vertical line x = 0 (grid u = 2)
        let p = Point::new(0.0, -0.9);
        let q = Point::new(0.0, -0.6);
        let pieces = mesh.clip_segment(p, q);
        for piece in &pieces {
            let c = mesh.cell(piece.cell);
            assert_eq!(c.i, 1, "assigned to the left square");
        }
        // re-clipping a piece reproduces it
        for piece in &pieces {
            let again = mesh.clip_segment(piece.start, piece.end);
            assert_eq!(again.len(), 1);
            assert_eq!(again[0].cell, piece.cell);
        }
        // along a diagonal: lower half
        let p = Point::new(-1.0, -1.0);
        let q = Point::new(-0.6, -0.6);
        let pieces = mesh.clip_segment(p, q);
        assert_eq!(pieces.len(), 1);
        assert_eq!(mesh.cell(pieces[0].cell).half, Half::Lower);
    }
}
