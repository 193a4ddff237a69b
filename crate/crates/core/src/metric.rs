//! Riesz representers, dual norms, distances and whitened coordinates, plus
//! the closed-form kernels of the continuous metric.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::currents::CurrentVector;
use crate::error::{Error, Result};
use crate::femspace::{FormSpace, GramOperator};
use crate::geometry::Point;
use crate::linalg::dot;

/// Coefficients of the representer form `beta = beta_x dx + beta_y dy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representer {
    pub bx: Vec<f64>,
    pub by: Vec<f64>,
    pub s: u32,
    pub sigma: f64,
}

/// Whitened coordinates `[w_x, w_y]` of a current: Euclidean distances between
/// whitened points equal dual-norm distances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhitenedPoint {
    pub w: Vec<f64>,
}

impl WhitenedPoint {
    pub fn norm(&self) -> f64 {
        dot(&self.w, &self.w).sqrt()
    }

    pub fn distance(&self, other: &WhitenedPoint) -> f64 {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn check(f: &CurrentVector, g: &GramOperator, s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::Configuration("Sobolev order must be at least 1".into()));
    }
    let desc = g.space().descriptor();
    if *f.space() != desc || f.len() != g.dim() {
        return Err(Error::Configuration(format!(
            "current on {:?} cannot be measured with a Gram operator on {:?}",
            f.space(),
            desc
        )));
    }
    Ok(())
}

pub fn representer(f: &CurrentVector, g: &GramOperator, s: u32) -> Result<Representer> {
    check(f, g, s)?;
    Ok(Representer {
        bx: g.solve_power(f.fx(), s),
        by: g.solve_power(f.fy(), s),
        s,
        sigma: g.sigma(),
    })
}

/// `sqrt(fx^T bx + fy^T by)`.
pub fn dual_norm(f: &CurrentVector, g: &GramOperator, s: u32) -> Result<f64> {
    let b = representer(f, g, s)?;
    let sq = dot(f.fx(), &b.bx) + dot(f.fy(), &b.by);
    Ok(sq.max(0.0).sqrt())
}

pub fn distance(f1: &CurrentVector, f2: &CurrentVector, g: &GramOperator, s: u32) -> Result<f64> {
    dual_norm(&f1.difference(f2)?, g, s)
}

pub fn whiten(f: &CurrentVector, g: &GramOperator, s: u32) -> Result<WhitenedPoint> {
    check(f, g, s)?;
    let mut w = g.whiten(f.fx(), s)?;
    w.extend(g.whiten(f.fy(), s)?);
    Ok(WhitenedPoint { w })
}

/// Whitens many currents in parallel.
pub fn whiten_all(currents: &[CurrentVector], g: &GramOperator, s: u32) -> Result<Vec<WhitenedPoint>> {
    currents.par_iter().map(|f| whiten(f, g, s)).collect()
}

/// Pairwise distances computed from whitened coordinates.
pub fn distance_matrix(points: &[WhitenedPoint]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = points[i].distance(&points[j]);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Square, headerless, row-major CSV.
pub fn distance_matrix_csv(d: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in d {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// The one-dimensional kernel of `(1 - d^2/dx^2)^s`, in units where `sigma = 1`:
/// `K_1(x) = e^{-|x|} / 2` and `K_2(x) = e^{-|x|} (1 + |x|) / 4`.
pub fn kernel_1d(s: u32, x: f64) -> Result<f64> {
    let a = x.abs();
    match s {
        1 => Ok(0.5 * (-a).exp()),
        2 => Ok(0.25 * (-a).exp() * (1.0 + a)),
        _ => Err(Error::Configuration(format!("no closed-form kernel for s = {s}"))),
    }
}

/// Distance per unit length between two parallel lines at separation `eps`:
/// `sqrt(2 (K(0) - K(eps / sigma)))`.
pub fn line_distance_per_unit_length(s: u32, eps: f64, sigma: f64) -> Result<f64> {
    let k0 = kernel_1d(s, 0.0)?;
    let ke = kernel_1d(s, eps / sigma)?;
    Ok((2.0 * (k0 - ke)).max(0.0).sqrt())
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function of the second kind of order zero, `x > 0`.
///
/// Power series for `x <= 2`; for larger `x` the trapezoid rule applied to
/// `int_0^inf exp(-x cosh t) dt`, which converges geometrically in the step.
pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0, "K0 needs a positive argument");
    if x <= 2.0 {
        let q = 0.25 * x * x;
        let log_term = (0.5 * x).ln() + EULER_GAMMA;
        let (mut term, mut harmonic) = (1.0, 0.0);
        let mut sum = -log_term;
        for k in 1..60 {
            let kf = k as f64;
            term *= q / (kf * kf);
            harmonic += 1.0 / kf;
            let add = term * (harmonic - log_term);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        // The integrand stays bounded on the strip |Im t| < pi/2, so the
        // discretization error is about exp(x - pi^2 / h) relative to K0.
        let h = (PI * PI / (x + 45.0)).min(0.25);
        let scale = (-x).exp();
        let mut sum = 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            let v = (-x * (t.cosh() - 1.0)).exp();
            sum += v;
            if v < 1e-18 * sum {
                break;
            }
            k += 1;
        }
        scale * sum * h
    }
}

/// Green's function of `1 - sigma^2 Laplacian` in the plane:
/// `K0(r / sigma) / (2 pi sigma^2)`.
pub fn greens_function_2d(r: f64, sigma: f64) -> f64 {
    bessel_k0(r / sigma) / (2.0 * PI * sigma * sigma)
}

/// Evaluates `(beta_x, beta_y)` at each grid point.
pub fn representer_field_eval(rep: &Representer, space: &FormSpace, grid: &[Point]) -> Vec<Point> {
    grid.par_iter()
        .map(|&p| Point::new(space.evaluate(&rep.bx, p), space.evaluate(&rep.by, p)))
        .collect()
}

/// CSV with header `x,y,bx,by`.
pub fn representer_field_csv(grid: &[Point], field: &[Point]) -> String {
    let mut out = String::from("x,y,bx,by\n");
    for (p, b) in grid.iter().zip(field) {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", p.x, p.y, b.x, b.y);
    }
    out
}
