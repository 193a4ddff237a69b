//! Sampled planar curves and the generators used by the experiments.
//!
//! A [`SampledCurve`] is the discrete stand-in for a Lipschitz immersion of the
//! circle: an ordered list of points joined by straight segments, with the wrap
//! segment from the last point back to the first when the curve is closed.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Point>,
    closed: bool,
}

impl SampledCurve {
    pub fn new(params: Vec<f64>, points: Vec<Point>, closed: bool) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidCurve(format!(
                "{} parameter values for {} points",
                params.len(),
                points.len()
            )));
        }
        let min_len = if closed { 3 } else { 2 };
        if points.len() < min_len {
            return Err(Error::InvalidCurve(format!(
                "a {} curve needs at least {min_len} points, got {}",
                if closed { "closed" } else { "open" },
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidCurve(format!("point {i} is not finite")));
        }
        let upper_ok = |t: f64| if closed { t < 1.0 } else { t <= 1.0 };
        if let Some(i) = params.iter().position(|&t| !(t >= 0.0 && upper_ok(t))) {
            return Err(Error::InvalidCurve(format!(
                "parameter {i} = {} outside the unit interval",
                params[i]
            )));
        }
        if let Some(i) = params.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve(format!(
                "parameters not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(SampledCurve {
            params,
            points,
            closed,
        })
    }

    /// Closed curve with uniform parameters `i / n`.
    pub fn closed_from_points(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        let params = (0..n).map(|i| i as f64 / n as f64).collect();
        SampledCurve::new(params, points, true)
    }

    /// Open curve with uniform parameters `i / (n - 1)`.
    pub fn open_from_points(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        let denom = (n.max(2) - 1) as f64;
        let params = (0..n).map(|i| i as f64 / denom).collect();
        SampledCurve::new(params, points, false)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    /// Segments `(p_i, p_{i+1})`, including the wrap segment of a closed curve.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..self.segment_count()).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn polyline_length(&self) -> f64 {
        self.segments().map(|(p, q)| p.distance(q)).sum()
    }

    /// Shoelace signed area; positive for counterclockwise closed curves.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        let mut twice = 0.0;
        for i in 0..n {
            let p = self.points[i];
            let q = self.points[(i + 1) % n];
            twice += p.cross(q);
        }
        0.5 * twice
    }

    /// Rejects curves whose polyline has no length at all.
    pub fn check_immersed(&self) -> Result<()> {
        if self.polyline_length() > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidCurve(
                "polyline has zero length (not an immersion)".into(),
            ))
        }
    }

    /// Drops points that coincide with their predecessor.
    pub fn dedup(&self) -> Result<Self> {
        let mut params = Vec::with_capacity(self.len());
        let mut points: Vec<Point> = Vec::with_capacity(self.len());
        for (&t, &p) in self.params.iter().zip(&self.points) {
            if points.last() != Some(&p) {
                params.push(t);
                points.push(p);
            }
        }
        if self.closed && points.len() > 1 && points.first() == points.last() {
            points.pop();
            params.pop();
        }
        SampledCurve::new(params, points, self.closed)
    }

    /// Reverses the traversal direction. Closed curves keep their first point
    /// so that reversing twice returns the original point sequence.
    pub fn reverse_orientation(&self) -> SampledCurve {
        let n = self.len();
        if self.closed {
            let mut points = Vec::with_capacity(n);
            let mut params = Vec::with_capacity(n);
            points.push(self.points[0]);
            params.push(0.0);
            for i in (1..n).rev() {
                points.push(self.points[i]);
                params.push(1.0 - self.params[i]);
            }
            // 1 - t can round so that neighbours collide; fall back to uniform spacing.
            if params.windows(2).any(|w| w[1] <= w[0]) || params.iter().any(|&t| t >= 1.0) {
                params = (0..n).map(|i| i as f64 / n as f64).collect();
            }
            SampledCurve {
                params,
                points,
                closed: true,
            }
        } else {
            let points = self.points.iter().rev().copied().collect();
            let params = self.params.iter().rev().map(|t| 1.0 - t).collect();
            SampledCurve {
                params,
                points,
                closed: false,
            }
        }
    }

    /// Cumulative arclength at each sample point (first entry 0).
    pub fn cumulative_length(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for (p, q) in self.segments() {
            acc += p.distance(q);
            out.push(acc);
        }
        out
    }

    /// Point at arclength `s` along the polyline (wrapping for closed curves).
    pub fn point_at_arclength(&self, cumulative: &[f64], s: f64) -> Point {
        let total = *cumulative.last().unwrap();
        let s = if self.closed {
            s.rem_euclid(total)
        } else {
            s.clamp(0.0, total)
        };
        let seg = match cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(self.segment_count() - 1),
            Err(i) => i.saturating_sub(1).min(self.segment_count() - 1),
        };
        let n = self.len();
        let p = self.points[seg];
        let q = self.points[(seg + 1) % n];
        let len = cumulative[seg + 1] - cumulative[seg];
        if len == 0.0 {
            p
        } else {
            p.lerp(q, ((s - cumulative[seg]) / len).clamp(0.0, 1.0))
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(48 * self.len() + 32);
        let _ = writeln!(out, "# closed={}", self.closed);
        out.push_str("t,x,y\n");
        for (t, p) in self.params.iter().zip(&self.points) {
            let _ = writeln!(out, "{t:.17e},{:.17e},{:.17e}", p.x, p.y);
        }
        out
    }

    pub fn from_csv_str(text: &str, path: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut closed = true;
        let mut saw_header = false;
        let mut params = Vec::new();
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some(value) = meta.trim().strip_prefix("closed=") {
                    closed = match value.trim() {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(parse_err(line_no, format!("bad closed flag `{other}`")));
                        }
                    };
                }
                continue;
            }
            if !saw_header {
                let cols: Vec<_> = line.split(',').map(str::trim).collect();
                if cols != ["t", "x", "y"] {
                    return Err(parse_err(line_no, format!("expected header `t,x,y`, got `{line}`")));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<_> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(parse_err(
                    line_no,
                    format!("expected 3 fields, got {}", fields.len()),
                ));
            }
            let mut vals = [0.0; 3];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("`{f}` is not a number")))?;
            }
            params.push(vals[0]);
            points.push(Point::new(vals[1], vals[2]));
        }
        if !saw_header {
            return Err(parse_err(1, "missing `t,x,y` header".into()));
        }
        SampledCurve::new(params, points, closed)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SampledCurve::from_csv_str(&text, path)
    }
}

/// Finitely supported Fourier series `z(t) = sum_k c_k exp(2 pi i k t)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierCoeffs {
    pub coeffs: BTreeMap<i32, Complex<f64>>,
}

impl FourierCoeffs {
    pub fn new() -> Self {
        FourierCoeffs::default()
    }

    pub fn with(mut self, k: i32, c: Complex<f64>) -> Self {
        self.coeffs.insert(k, c);
        self
    }

    pub fn set(&mut self, k: i32, c: Complex<f64>) {
        self.coeffs.insert(k, c);
    }

    pub fn get(&self, k: i32) -> Complex<f64> {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn eval(&self, t: f64) -> Point {
        let mut z = Complex::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            z += c * Complex::from_polar(1.0, TAU * k as f64 * t);
        }
        Point::new(z.re, z.im)
    }

    /// Derivative `z'(t)`.
    pub fn eval_derivative(&self, t: f64) -> Point {
        let mut z = Complex::new(0.0, 0.0);
        for (&k, &c) in &self.coeffs {
            let w = TAU * k as f64;
            z += c * Complex::new(0.0, w) * Complex::from_polar(1.0, w * t);
        }
        Point::new(z.re, z.im)
    }

    /// Random smooth shape: `c_1 = 0.5`, `c_0 = c_{-1} = 0`, and `c_k` for
    /// `2 <= k <= 6` circular complex normal with standard deviation
    /// `1 / (1 + k^3)`, i.e. `E|c_k|^2 = (1 + k^3)^{-2}`.
    pub fn random_smooth(rng: &mut impl rand::Rng) -> Self {
        let mut f = FourierCoeffs::new().with(1, Complex::new(0.5, 0.0));
        for k in 2..=6 {
            let sd = std::f64::consts::FRAC_1_SQRT_2 / (1.0 + (k as f64).powi(3));
            let normal = Normal::new(0.0, sd).unwrap();
            f.set(k, Complex::new(normal.sample(rng), normal.sample(rng)));
        }
        f
    }

    /// Random shape whose coefficients decay like `|k|^{-decay}` for
    /// `2 <= |k| <= kmax`, on top of the unit circle of radius `radius`.
    pub fn random_decaying(rng: &mut impl rand::Rng, radius: f64, decay: f64, kmax: i32, scale: f64) -> Self {
        let mut f = FourierCoeffs::new().with(1, Complex::new(radius, 0.0));
        let normal = Normal::new(0.0, 1.0).unwrap();
        for k in (-kmax..=kmax).filter(|k| k.abs() >= 2) {
            let sd = scale * (k.abs() as f64).powf(-decay);
            f.set(k, Complex::new(sd * normal.sample(rng), sd * normal.sample(rng)));
        }
        f
    }
}

pub fn fourier_shape(coeffs: &FourierCoeffs, n: usize) -> Result<SampledCurve> {
    if n < 3 {
        return Err(Error::InvalidCurve(format!("need at least 3 points, got {n}")));
    }
    let params: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let points = params.iter().map(|&t| coeffs.eval(t)).collect();
    SampledCurve::new(params, points, true)
}

fn theta_curve(n: usize, f: impl Fn(f64) -> Point) -> Result<SampledCurve> {
    if n < 3 {
        return Err(Error::InvalidCurve(format!("need at least 3 points, got {n}")));
    }
    let params: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let points = params.iter().map(|&t| f(TAU * t)).collect();
    SampledCurve::new(params, points, true)
}

pub fn circle(radius: f64, n: usize) -> Result<SampledCurve> {
    theta_curve(n, |th| Point::new(radius * th.cos(), radius * th.sin()))
}

fn signed_pow(v: f64, p: f64) -> f64 {
    v.signum() * v.abs().powf(p)
}

/// Counterclockwise supercircle `|x|^r + |y|^r = (1/2)^r`.
pub fn supercircle(r_exp: f64, n: usize) -> Result<SampledCurve> {
    if !(r_exp > 0.0 && r_exp.is_finite()) {
        return Err(Error::InvalidCurve(format!("supercircle exponent must be positive, got {r_exp}")));
    }
    let p = 2.0 / r_exp;
    theta_curve(n, |th| {
        Point::new(0.5 * signed_pow(th.cos(), p), 0.5 * signed_pow(th.sin(), p))
    })
}

/// Circle of radius 0.5 whose radius is scaled by `1 + eps cos(omega theta)`.
pub fn wiggly_circle(eps: f64, omega: u32, n: usize) -> Result<SampledCurve> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidCurve(format!("wiggle amplitude must lie in [0, 1), got {eps}")));
    }
    let w = omega as f64;
    theta_curve(n, |th| {
        let r = 0.5 * (1.0 + eps * (w * th).cos());
        Point::new(r * th.cos(), r * th.sin())
    })
}

/// Figure-eight used as the "bowtie": `(0.25 sin 4 pi t, 0.5 sin 2 pi t)`.
pub fn bowtie(n: usize) -> Result<SampledCurve> {
    theta_curve(n, |th| Point::new(0.25 * (2.0 * th).sin(), 0.5 * th.sin()))
}

/// The unit segment from (0, 0) to (1, 0) with `n` equally spaced points.
pub fn segment_line(n: usize) -> Result<SampledCurve> {
    if n < 2 {
        return Err(Error::InvalidCurve(format!("a segment needs at least 2 points, got {n}")));
    }
    let points = (0..n)
        .map(|i| Point::new(i as f64 / (n - 1) as f64, 0.0))
        .collect();
    SampledCurve::open_from_points(points)
}

/// Open straight segment from `a` to `b` with `n` equally spaced points.
pub fn straight_segment(a: Point, b: Point, n: usize) -> Result<SampledCurve> {
    if n < 2 {
        return Err(Error::InvalidCurve(format!("a segment needs at least 2 points, got {n}")));
    }
    let points = (0..n).map(|i| a.lerp(b, i as f64 / (n - 1) as f64)).collect();
    SampledCurve::open_from_points(points)
}

/// Adds i.i.d. `N(0, eps^2)` noise to both coordinates of every point, skipping
/// the first and last point when `fix_endpoints` is set.
pub fn add_noise(curve: &SampledCurve, eps: f64, seed: u64, fix_endpoints: bool) -> Result<SampledCurve> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidCurve(format!("noise level must be non-negative, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(curve.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, eps).unwrap();
    let n = curve.len();
    let points = curve
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if fix_endpoints && (i == 0 || i == n - 1) {
                p
            } else {
                Point::new(p.x + normal.sample(&mut rng), p.y + normal.sample(&mut rng))
            }
        })
        .collect();
    SampledCurve::new(curve.params().to_vec(), points, curve.is_closed())
}

/// Random reparameterization: the arclength position of each sample is
/// jittered by `N(0, sigma_t^2)` (in length units), positions are re-sorted
/// and the polyline is resampled there.
pub fn reparameterize(curve: &SampledCurve, sigma_t: f64, seed: u64) -> Result<SampledCurve> {
    if !(sigma_t >= 0.0 && sigma_t.is_finite()) {
        return Err(Error::InvalidCurve(format!(
            "reparameterization spread must be non-negative, got {sigma_t}"
        )));
    }
    if sigma_t == 0.0 {
        return Ok(curve.clone());
    }
    let cumulative = curve.cumulative_length();
    let total = *cumulative.last().unwrap();
    if total == 0.0 {
        return Err(Error::InvalidCurve("cannot reparameterize a zero-length curve".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma_t).unwrap();
    let n = curve.len();
    let mut positions: Vec<f64> = if curve.is_closed() {
        (0..n)
            .map(|i| (i as f64 * total / n as f64 + normal.sample(&mut rng)).rem_euclid(total))
            .collect()
    } else {
        let mut v: Vec<f64> = (1..n - 1)
            .map(|i| (i as f64 * total / (n - 1) as f64 + normal.sample(&mut rng)).clamp(0.0, total))
            .collect();
        v.push(0.0);
        v.push(total);
        v
    };
    positions.sort_by(f64::total_cmp);
    positions.dedup();
    let points: Vec<Point> = positions
        .iter()
        .map(|&s| curve.point_at_arclength(&cumulative, s))
        .collect();
    let params: Vec<f64> = if curve.is_closed() {
        positions.iter().map(|&s| (s / total).min(1.0 - f64::EPSILON)).collect()
    } else {
        positions.iter().map(|&s| s / total).collect()
    };
    SampledCurve::new(params, points, curve.is_closed())
}

/// Sum of segment lengths; the noise-sensitive comparison baseline.
pub fn arclength_functional(curve: &SampledCurve) -> f64 {
    curve.polyline_length()
}

/// Exact perimeter of a circle, used by tests and presets.
pub fn circle_perimeter(radius: f64) -> f64 {
    TAU * radius
}

/// Exact area of a circle.
pub fn circle_area(radius: f64) -> f64 {
    PI * radius * radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fourier_circle_starts_at_half() {
        let coeffs = FourierCoeffs::new().with(1, Complex::new(0.5, 0.0));
        let c = fourier_shape(&coeffs, 512).unwrap();
        assert_abs_diff_eq!(c.points()[0].x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.points()[0].y, 0.0, epsilon = 1e-15);
        for p in c.points() {
            assert_abs_diff_eq!(p.norm(), 0.5, epsilon = 1e-14);
        }
        // counterclockwise
        assert!(c.signed_area() > 0.0);
    }

    #[test]
    fn fourier_rejects_too_few_points() {
        assert!(matches!(
            fourier_shape(&FourierCoeffs::new(), 2),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn empty_coefficients_fail_immersion_check() {
        let c = fourier_shape(&FourierCoeffs::new(), 8).unwrap();
        assert!(c.points().iter().all(|p| *p == Point::default()));
        assert!(c.check_immersed().is_err());
    }

    #[test]
    fn random_smooth_shapes_stay_inside_unit_disc() {
        for seed in 0..32 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs = FourierCoeffs::random_smooth(&mut rng);
            assert_eq!(coeffs.get(0), Complex::new(0.0, 0.0));
            assert_eq!(coeffs.get(-1), Complex::new(0.0, 0.0));
            let c = fourier_shape(&coeffs, 256).unwrap();
            let max = c.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
            assert!(max < 1.0, "seed {seed}: max radius {max}");
        }
    }

    #[test]
    fn supercircle_two_is_circle() {
        let c = supercircle(2.0, 512).unwrap();
        assert_eq!(c.points()[0], Point::new(0.5, 0.0));
        for p in c.points() {
            assert_abs_diff_eq!(p.x * p.x + p.y * p.y, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn supercircle_large_exponent_approaches_square_corner() {
        let c = supercircle(64.0, 8).unwrap();
        // t = 1/8 is the diagonal direction
        let p = c.points()[1];
        assert!((p.x - 0.5).abs() < 0.02 && (p.y - 0.5).abs() < 0.02, "{p:?}");
    }

    #[test]
    fn wiggly_radius_range() {
        let flat = wiggly_circle(0.0, 7, 256).unwrap();
        let base = circle(0.5, 256).unwrap();
        assert_eq!(flat.points(), base.points());

        let c = wiggly_circle(0.1, 2, 1000).unwrap();
        let radii: Vec<f64> = c.points().iter().map(|p| p.norm()).collect();
        let max = radii.iter().copied().fold(f64::MIN, f64::max);
        let min = radii.iter().copied().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(max, 0.55, epsilon = 1e-12);
        assert_abs_diff_eq!(min, 0.45, epsilon = 1e-12);

        let c = wiggly_circle(0.05, 32, 5000).unwrap();
        let max = c.points().iter().map(|p| p.norm()).fold(f64::MIN, f64::max);
        assert_abs_diff_eq!(max, 0.525, epsilon = 1e-12);
    }

    #[test]
    fn noise_is_deterministic_and_zero_is_identity() {
        let c = circle(0.5, 64).unwrap();
        assert_eq!(add_noise(&c, 0.0, 1, false).unwrap(), c);
        let a = add_noise(&c, 0.05, 7, false).unwrap();
        let b = add_noise(&c, 0.05, 7, false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let s = segment_line(11).unwrap();
        let noisy = add_noise(&s, 0.01, 3, true).unwrap();
        assert_eq!(noisy.points()[0], s.points()[0]);
        assert_eq!(noisy.points()[10], s.points()[10]);
    }

    #[test]
    fn reparameterize_preserves_length() {
        let c = circle(0.5, 512).unwrap();
        assert_eq!(reparameterize(&c, 0.0, 3).unwrap(), c);
        for seed in 0..5 {
            let r = reparameterize(&c, 0.1, seed).unwrap();
            let rel = (r.polyline_length() - c.polyline_length()).abs() / c.polyline_length();
            assert!(rel < 5e-3, "seed {seed}: {rel}");
        }
    }

    #[test]
    fn segment_line_spacing() {
        let s = segment_line(2).unwrap();
        assert_eq!(s.points(), &[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]);
        let s = segment_line(101).unwrap();
        assert_abs_diff_eq!(s.points()[1].x, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(s.polyline_length(), 1.0, epsilon = 1e-14);
        assert!(!s.is_closed());
    }

    #[test]
    fn circle_length_and_reversal() {
        let c = circle(0.5, 512).unwrap();
        assert!((c.polyline_length() - PI).abs() < 1e-4);
        let r = c.reverse_orientation();
        assert_abs_diff_eq!(r.signed_area(), -c.signed_area(), epsilon = 1e-13);
        assert_eq!(r.reverse_orientation().points(), c.points());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let c = wiggly_circle(0.1, 3, 17).unwrap();
        let text = c.to_csv_string();
        assert!(text.starts_with("# closed=true\nt,x,y\n"));
        let back = SampledCurve::from_csv_str(&text, Path::new("mem")).unwrap();
        assert_eq!(back, c);

        let bad = "# closed=true\nt,x,y\n0,1,2\n0.5,abc,1\n";
        match SampledCurve::from_csv_str(bad, Path::new("bad.csv")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(SampledCurve::new(vec![0.0, 0.5, 0.5], pts.clone(), true).is_err());
        assert!(SampledCurve::new(vec![0.0, 0.5, 1.0], pts.clone(), true).is_err());
        assert!(SampledCurve::new(vec![0.0, 0.5], pts, true).is_err());
    }
}
