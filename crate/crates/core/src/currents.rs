//! Current vectors: a curve integrated against every basis 1-form.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::femspace::{FormSpace, LagrangeSpace, MonomialSpace, SpaceDescriptor};
use crate::geometry::Point;

pub use crate::curve::arclength_functional as arclength;

/// Rule for integrating along straight pieces of the polyline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    #[default]
    Midpoint,
    /// On Lagrange spaces, Simpson's rule on every clipped piece. On monomial
    /// spaces the curve is first replaced by its piecewise quadratic
    /// interpolant through consecutive pairs of segments, and Simpson's rule
    /// is applied in the parameter of each quadratic arc.
    Simpson,
}

impl QuadratureRule {
    pub fn name(self) -> &'static str {
        match self {
            QuadratureRule::Midpoint => "midpoint",
            QuadratureRule::Simpson => "simpson",
        }
    }
}

impl FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(QuadratureRule::Midpoint),
            "simpson" => Ok(QuadratureRule::Simpson),
            other => Err(Error::Configuration(format!(
                "unknown quadrature rule {other:?} (expected midpoint or simpson)"
            ))),
        }
    }
}

/// Coefficients `fx_i = [phi](w_i dx)` and `fy_i = [phi](w_i dy)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentVector {
    space: SpaceDescriptor,
    fx: Vec<f64>,
    fy: Vec<f64>,
}

impl CurrentVector {
    pub fn new(space: SpaceDescriptor, fx: Vec<f64>, fy: Vec<f64>) -> Result<Self> {
        if fx.len() != fy.len() {
            return Err(Error::Configuration(format!(
                "current components differ in length: {} and {}",
                fx.len(),
                fy.len()
            )));
        }
        Ok(CurrentVector { space, fx, fy })
    }

    pub fn zeros(space: SpaceDescriptor, len: usize) -> Self {
        CurrentVector {
            space,
            fx: vec![0.0; len],
            fy: vec![0.0; len],
        }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn fx(&self) -> &[f64] {
        &self.fx
    }

    pub fn fy(&self) -> &[f64] {
        &self.fy
    }

    pub fn len(&self) -> usize {
        self.fx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fx.is_empty()
    }

    pub fn check_compatible(&self, other: &CurrentVector) -> Result<()> {
        if self.space != other.space || self.len() != other.len() {
            return Err(Error::Configuration(format!(
                "currents live on different spaces: {:?} and {:?}",
                self.space, other.space
            )));
        }
        Ok(())
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &CurrentVector, alpha: f64) -> Result<CurrentVector> {
        self.check_compatible(other)?;
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + alpha * y).collect();
        Ok(CurrentVector {
            space: self.space,
            fx: comb(&self.fx, &other.fx),
            fy: comb(&self.fy, &other.fy),
        })
    }

    pub fn difference(&self, other: &CurrentVector) -> Result<CurrentVector> {
        self.add_scaled(other, -1.0)
    }

    pub fn scaled(&self, alpha: f64) -> CurrentVector {
        CurrentVector {
            space: self.space,
            fx: self.fx.iter().map(|v| alpha * v).collect(),
            fy: self.fy.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.fx.iter().chain(&self.fy).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Components concatenated as `[fx, fy]`.
    pub fn concatenated(&self) -> Vec<f64> {
        let mut v = self.fx.clone();
        v.extend_from_slice(&self.fy);
        v
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: CurrentVector = serde_json::from_str(text)?;
        CurrentVector::new(c.space, c.fx, c.fy)
    }

    /// CSV with header `dof,fx,fy`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(48 * self.len() + 16);
        out.push_str("dof,fx,fy\n");
        for (i, (x, y)) in self.fx.iter().zip(&self.fy).enumerate() {
            let _ = writeln!(out, "{i},{x:.16e},{y:.16e}");
        }
        out
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

fn check_curve(curve: &SampledCurve, space: &FormSpace) -> Result<()> {
    curve.check_immersed()?;
    let domain = space.domain();
    for (index, &p) in curve.points().iter().enumerate() {
        if !domain.contains(p) {
            return Err(Error::OutOfDomain {
                index,
                x: p.x,
                y: p.y,
                x0: domain.x0,
                x1: domain.x1,
                y0: domain.y0,
                y1: domain.y1,
            });
        }
    }
    Ok(())
}

/// The discrete current of `curve` against the basis of `space`.
pub fn evaluate_current(curve: &SampledCurve, space: &FormSpace, rule: QuadratureRule) -> Result<CurrentVector> {
    check_curve(curve, space)?;
    let n = space.dof_count();
    let mut fx = vec![0.0; n];
    let mut fy = vec![0.0; n];
    match space {
        FormSpace::Lagrange(s) => lagrange_current(curve, s, rule, &mut fx, &mut fy),
        FormSpace::Monomial(s) => monomial_current(curve, s, rule, &mut fx, &mut fy),
    }
    Ok(CurrentVector {
        space: space.descriptor(),
        fx,
        fy,
    })
}

fn lagrange_current(curve: &SampledCurve, s: &LagrangeSpace, rule: QuadratureRule, fx: &mut [f64], fy: &mut [f64]) {
    let nl = s.local_count();
    let mut dofs = [0usize; 15];
    let mut v0 = [0.0; 15];
    let mut v1 = [0.0; 15];
    let mut v2 = [0.0; 15];
    for (p, q) in curve.segments() {
        for piece in s.mesh().clip_segment(p, q) {
            let d = piece.end - piece.start;
            s.local_dofs(piece.cell, &mut dofs[..nl]);
            let mid = piece.start.midpoint(piece.end);
            s.local_values(piece.cell, mid, &mut v1[..nl]);
            match rule {
                QuadratureRule::Midpoint => {
                    for k in 0..nl {
                        fx[dofs[k]] += v1[k] * d.x;
                        fy[dofs[k]] += v1[k] * d.y;
                    }
                }
                QuadratureRule::Simpson => {
                    s.local_values(piece.cell, piece.start, &mut v0[..nl]);
                    s.local_values(piece.cell, piece.end, &mut v2[..nl]);
                    for k in 0..nl {
                        let w = (v0[k] + 4.0 * v1[k] + v2[k]) / 6.0;
                        fx[dofs[k]] += w * d.x;
                        fy[dofs[k]] += w * d.y;
                    }
                }
            }
        }
    }
}

fn monomial_current(curve: &SampledCurve, s: &MonomialSpace, rule: QuadratureRule, fx: &mut [f64], fy: &mut [f64]) {
    let n = s.dof_count();
    let mut vals = vec![0.0; n];
    let mut add = |at: Point, tangent: Point, weight: f64| {
        s.values(at, &mut vals);
        for k in 0..n {
            fx[k] += weight * vals[k] * tangent.x;
            fy[k] += weight * vals[k] * tangent.y;
        }
    };
    let segs: Vec<(Point, Point)> = curve.segments().collect();
    match rule {
        QuadratureRule::Midpoint => {
            for &(p, q) in &segs {
                add(p.midpoint(q), q - p, 1.0);
            }
        }
        QuadratureRule::Simpson => {
            let pairs = segs.len() / 2;
            for k in 0..pairs {
                let (p0, p1) = segs[2 * k];
                let p2 = segs[2 * k + 1].1;
                // P(tau) = p1 + tau (p2 - p0) / 2 + tau^2 (p0 - 2 p1 + p2) / 2 on [-1, 1]
                let d_start = (p0 * -3.0 + p1 * 4.0 - p2) * 0.5;
                let d_mid = (p2 - p0) * 0.5;
                let d_end = (p0 - p1 * 4.0 + p2 * 3.0) * 0.5;
                add(p0, d_start, 1.0 / 3.0);
                add(p1, d_mid, 4.0 / 3.0);
                add(p2, d_end, 1.0 / 3.0);
            }
            if segs.len() % 2 == 1 {
                let (p, q) = segs[segs.len() - 1];
                let d = q - p;
                add(p, d, 1.0 / 6.0);
                add(p.midpoint(q), d, 4.0 / 6.0);
                add(q, d, 1.0 / 6.0);
            }
        }
    }
}

/// Current of a smooth parameterized curve `t -> (z(t), z'(t))` on `[0, 1]`,
/// computed with `panels` Gauss–Legendre panels of order 8. Used as a
/// reference value for quadrature studies on monomial spaces.
pub fn parametric_current(
    path: impl Fn(f64) -> (Point, Point),
    space: &MonomialSpace,
    desc: SpaceDescriptor,
    panels: usize,
) -> CurrentVector {
    let n = space.dof_count();
    let mut fx = vec![0.0; n];
    let mut fy = vec![0.0; n];
    let mut vals = vec![0.0; n];
    let h = 1.0 / panels as f64;
    let rule = crate::quadrature::gauss_legendre_on(8, 0.0, h);
    for k in 0..panels {
        let t0 = k as f64 * h;
        for &(t, w) in &rule {
            let (z, dz) = path(t0 + t);
            space.values(z, &mut vals);
            for i in 0..n {
                fx[i] += w * vals[i] * dz.x;
                fy[i] += w * vals[i] * dz.y;
            }
        }
    }
    CurrentVector { space: desc, fx, fy }
}

/// `int (d alpha_2/dx - d alpha_1/dy) (X_1 dy - X_2 dx)` along the curve, the
/// derivative of `phi -> [phi](alpha)` in the direction of the vector field `X`
/// sampled at the curve points. Uses the midpoint rule on clipped pieces with
/// `X` interpolated linearly along each segment.
pub fn directional_derivative(
    curve: &SampledCurve,
    field: &[Point],
    alpha_x: &[f64],
    alpha_y: &[f64],
    space: &FormSpace,
) -> Result<f64> {
    check_curve(curve, space)?;
    if field.len() != curve.len() {
        return Err(Error::Configuration(format!(
            "vector field has {} samples for {} curve points",
            field.len(),
            curve.len()
        )));
    }
    let n = space.dof_count();
    if alpha_x.len() != n || alpha_y.len() != n {
        return Err(Error::Configuration(format!(
            "form coefficients must have length {n}"
        )));
    }
    let m = curve.len();
    let pts = curve.points();
    let seg_count = curve.segment_count();
    let mut total = 0.0;
    let mut grads = vec![Point::default(); n.max(15)];
    let mut dofs = [0usize; 15];
    for i in 0..seg_count {
        let (p, q) = (pts[i], pts[(i + 1) % m]);
        let (xp, xq) = (field[i], field[(i + 1) % m]);
        let len = p.distance(q);
        if len == 0.0 {
            continue;
        }
        let integrate = |a: Point, b: Point, curl: f64| {
            let mid = a.midpoint(b);
            let t = mid.distance(p) / len;
            let x = xp.lerp(xq, t);
            let d = b - a;
            curl * (x.x * d.y - x.y * d.x)
        };
        match space {
            FormSpace::Lagrange(s) => {
                let nl = s.local_count();
                for piece in s.mesh().clip_segment(p, q) {
                    let mid = piece.start.midpoint(piece.end);
                    s.local_dofs(piece.cell, &mut dofs[..nl]);
                    s.local_gradients(piece.cell, mid, &mut grads[..nl]);
                    let mut curl = 0.0;
                    for k in 0..nl {
                        curl += grads[k].x * alpha_y[dofs[k]] - grads[k].y * alpha_x[dofs[k]];
                    }
                    total += integrate(piece.start, piece.end, curl);
                }
            }
            FormSpace::Monomial(s) => {
                let mid = p.midpoint(q);
                s.gradients(mid, &mut grads[..n]);
                let curl: f64 = (0..n).map(|k| grads[k].x * alpha_y[k] - grads[k].y * alpha_x[k]).sum();
                total += integrate(p, q, curl);
            }
        }
    }
    Ok(total)
}

/// `[phi](alpha)` for a form with coefficient vectors `alpha_x`, `alpha_y`.
pub fn pair(current: &CurrentVector, alpha_x: &[f64], alpha_y: &[f64]) -> f64 {
    crate::linalg::dot(current.fx(), alpha_x) + crate::linalg::dot(current.fy(), alpha_y)
}
