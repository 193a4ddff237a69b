//! Planar embeddings of shape populations.
//!
//! Shapes enter as whitened current coordinates, in which Euclidean distance is
//! the dual norm distance. PCA projects them onto their top principal
//! directions; MDS then moves the planar points to fit the full distance
//! matrix in the least-squares sense.

use std::fmt::Write as _;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::curve::FourierCoeffs;
use crate::error::{Error, Result};
use crate::metric::WhitenedPoint;

/// Whitened current coordinates of a labelled set of shapes.
#[derive(Clone, Debug)]
pub struct ShapeDataset {
    labels: Vec<String>,
    classes: Option<Vec<String>>,
    rows: Vec<Vec<f64>>,
}

impl ShapeDataset {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::Validation(format!(
                "{} labels for {} shapes",
                labels.len(),
                rows.len()
            )));
        }
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(Error::Validation("whitened rows have different lengths".into()));
            }
        }
        Ok(ShapeDataset {
            labels,
            classes: None,
            rows,
        })
    }

    pub fn from_points(labels: Vec<String>, points: &[WhitenedPoint]) -> Result<Self> {
        Self::new(labels, points.iter().map(|p| p.w.clone()).collect())
    }

    pub fn with_classes(mut self, classes: Vec<String>) -> Result<Self> {
        if classes.len() != self.rows.len() {
            return Err(Error::Validation(format!(
                "{} class tags for {} shapes",
                classes.len(),
                self.rows.len()
            )));
        }
        self.classes = Some(classes);
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> Option<&[String]> {
        self.classes.as_deref()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        euclidean_distances(&self.rows)
    }
}

pub fn euclidean_distances(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingMethod {
    Pca,
    Mds,
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub coords: Vec<Vec<f64>>,
    pub stress: f64,
    pub method: EmbeddingMethod,
    /// Variance captured by each PCA component; empty for MDS.
    pub explained_variance: Vec<f64>,
    /// Stress after each accepted MDS iteration, starting with the initial stress.
    pub stress_history: Vec<f64>,
}

impl Embedding {
    pub fn dims(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }

    pub fn distances(&self) -> Vec<Vec<f64>> {
        euclidean_distances(&self.coords)
    }

    /// Mean of `|d_ij - |y_i - y_j||` over pairs `i < j`.
    pub fn mean_distance_error(&self, dist: &[Vec<f64>]) -> f64 {
        let e = self.distances();
        let n = e.len();
        let pairs = n * (n.saturating_sub(1)) / 2;
        if pairs == 0 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += (dist[i][j] - e[i][j]).abs();
            }
        }
        s / pairs as f64
    }

    /// CSV with header `label,class,x,y`; missing coordinates are written as 0.
    pub fn to_csv_string(&self, labels: &[String], classes: Option<&[String]>) -> String {
        let mut out = String::from("label,class,x,y\n");
        for (i, c) in self.coords.iter().enumerate() {
            let class = classes.map_or("", |cl| cl[i].as_str());
            let x = c.first().copied().unwrap_or(0.0);
            let y = c.get(1).copied().unwrap_or(0.0);
            let _ = writeln!(out, "{},{},{:.16e},{:.16e}", labels[i], class, x, y);
        }
        out
    }
}

/// `sum_{i<j} (d_ij - |y_i - y_j|)^2`.
pub fn stress(dist: &[Vec<f64>], coords: &[Vec<f64>]) -> f64 {
    let n = coords.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let e: f64 = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            s += (dist[i][j] - e).powi(2);
        }
    }
    s
}

/// Projection onto the top `k` principal directions.
///
/// Computed from the eigendecomposition of the centred `n x n` Gram matrix, so
/// the cost does not depend on the (large) whitened dimension. Each direction
/// is signed so that its largest-magnitude loading is positive.
pub fn pca(dataset: &ShapeDataset, k: usize) -> Result<Embedding> {
    let n = dataset.len();
    let dims = dataset.dims();
    if n < 2 {
        return Err(Error::Validation(format!("PCA needs at least 2 shapes, got {n}")));
    }
    if k == 0 || k > (n - 1).min(dims) {
        return Err(Error::Validation(format!(
            "cannot take {k} components of {n} shapes in {dims} dimensions"
        )));
    }
    let mut mean = vec![0.0; dims];
    for r in dataset.rows() {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v / n as f64;
        }
    }
    let x = DMatrix::from_fn(n, dims, |i, j| dataset.rows()[i][j] - mean[j]);
    let gram = &x * x.transpose();
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut coords = vec![vec![0.0; k]; n];
    let mut explained = Vec::with_capacity(k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        let lambda = eig.eigenvalues[idx].max(0.0);
        explained.push(lambda / (n - 1) as f64);
        if lambda <= 1e-14 * scale {
            continue;
        }
        let u = eig.eigenvectors.column(idx);
        let loading = x.transpose() * u;
        let (arg, _) = loading
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, &v)| if v.abs() > bv.abs() + 1e-12 * bv.abs() { (i, v) } else { (bi, bv) });
        let sign = if loading[arg] < 0.0 { -1.0 } else { 1.0 };
        let root = lambda.sqrt();
        for i in 0..n {
            coords[i][c] = sign * root * u[i];
        }
    }
    let dist = dataset.distance_matrix();
    Ok(Embedding {
        stress: stress(&dist, &coords),
        coords,
        method: EmbeddingMethod::Pca,
        explained_variance: explained,
        stress_history: Vec::new(),
    })
}

pub fn check_distance_matrix(dist: &[Vec<f64>]) -> Result<()> {
    let n = dist.len();
    let scale = dist.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Validation(format!("distance matrix row {i} has {} entries, expected {n}", row.len())));
        }
        if row[i].abs() > 1e-12 * scale {
            return Err(Error::Validation(format!("distance matrix has nonzero diagonal at {i}")));
        }
        for j in 0..i {
            if (row[j] - dist[j][i]).abs() > 1e-12 * scale || !row[j].is_finite() {
                return Err(Error::Validation(format!("distance matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Least-squares fit of the embedded distances to `dist`, starting from `init`.
///
/// Damped Gauss–Newton on the residuals `|y_i - y_j| - d_ij` with step halving;
/// a step is only accepted if it lowers the stress. Stops when the relative
/// stress change falls below `tol` or after `max_iters` iterations.
pub fn mds_stress(dist: &[Vec<f64>], init: &Embedding, max_iters: usize, tol: f64) -> Result<Embedding> {
    check_distance_matrix(dist)?;
    let n = dist.len();
    if init.coords.len() != n {
        return Err(Error::Validation(format!(
            "initial embedding has {} points for {n} distances",
            init.coords.len()
        )));
    }
    let k = init.dims();
    let mut y: Vec<Vec<f64>> = init.coords.clone();
    let mut current = stress(dist, &y);
    let mut history = vec![current];
    let mut mu = 1e-3;
    let p = n * k;
    for _ in 0..max_iters {
        if current == 0.0 {
            break;
        }
        let mut jtj = DMatrix::<f64>::zeros(p, p);
        let mut jtr = DVector::<f64>::zeros(p);
        for i in 0..n {
            for j in i + 1..n {
                let diff: Vec<f64> = (0..k).map(|c| y[i][c] - y[j][c]).collect();
                let e = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
                let r = e - dist[i][j];
                if e == 0.0 {
                    continue;
                }
                let g: Vec<f64> = diff.iter().map(|v| v / e).collect();
                // residual gradient: +g wrt y_i, -g wrt y_j
                for a in 0..k {
                    jtr[i * k + a] += g[a] * r;
                    jtr[j * k + a] -= g[a] * r;
                    for b in 0..k {
                        let v = g[a] * g[b];
                        jtj[(i * k + a, i * k + b)] += v;
                        jtj[(j * k + a, j * k + b)] += v;
                        jtj[(i * k + a, j * k + b)] -= v;
                        jtj[(j * k + a, i * k + b)] -= v;
                    }
                }
            }
        }
        let diag_max = (0..p).map(|i| jtj[(i, i)]).fold(0.0f64, f64::max).max(1e-300);
        let mut accepted = None;
        for _attempt in 0..8 {
            let mut a = jtj.clone();
            for i in 0..p {
                a[(i, i)] += mu * diag_max;
            }
            let Some(chol) = a.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let step = chol.solve(&jtr);
            let mut t = 1.0;
            for _halving in 0..30 {
                let trial: Vec<Vec<f64>> = (0..n)
                    .map(|i| (0..k).map(|c| y[i][c] - t * step[i * k + c]).collect())
                    .collect();
                let s = stress(dist, &trial);
                if s < current {
                    accepted = Some((trial, s));
                    break;
                }
                t *= 0.5;
            }
            if accepted.is_some() {
                mu = (mu * 0.3).max(1e-12);
                break;
            }
            mu *= 10.0;
        }
        let Some((trial, s)) = accepted else { break };
        let rel = (current - s) / current;
        y = trial;
        current = s;
        history.push(s);
        if rel < tol {
            break;
        }
    }
    Ok(Embedding {
        coords: y,
        stress: current,
        method: EmbeddingMethod::Mds,
        explained_variance: Vec::new(),
        stress_history: history,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSeparation {
    pub class_a: String,
    pub class_b: String,
    /// Best accuracy of a single line over the points of the two classes.
    pub accuracy: f64,
    pub separable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub pairs: Vec<PairSeparation>,
    pub min_accuracy: f64,
    /// Set when fewer than two classes are present.
    pub degenerate: bool,
}

/// Best accuracy of a linear separator between two planar point sets.
///
/// The classification by a line only changes at directions orthogonal to the
/// difference of two points, so it suffices to test one direction inside every
/// arc between consecutive critical angles, with the best threshold for each.
pub fn linear_separation_accuracy(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let total = a.len() + b.len();
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let pts: Vec<([f64; 2], bool)> = a.iter().map(|&p| (p, true)).chain(b.iter().map(|&p| (p, false))).collect();
    let mut angles = vec![0.0];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let dx = pts[j].0[0] - pts[i].0[0];
            let dy = pts[j].0[1] - pts[i].0[1];
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            // directions orthogonal to the difference, reduced to [0, pi)
            let th = (dy.atan2(dx) + std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::PI);
            angles.push(th);
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let mut candidates: Vec<f64> = angles.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    candidates.push(0.5 * (angles[angles.len() - 1] + std::f64::consts::PI + angles[0]));
    candidates.extend(angles.iter().copied());
    let mut best = 0usize;
    for th in candidates {
        let (c, s) = (th.cos(), th.sin());
        let mut proj: Vec<(f64, bool)> = pts.iter().map(|(p, l)| (p[0] * c + p[1] * s, *l)).collect();
        proj.sort_by(|x, y| x.0.total_cmp(&y.0));
        // threshold after position m: left predicted `a`, right `b` (or the reverse)
        let total_a = a.len();
        let mut a_left = 0usize;
        let mut b_left = 0usize;
        let mut m = 0;
        loop {
            if m == 0 || m == proj.len() || proj[m - 1].0 < proj[m].0 {
                let b_right = b.len() - b_left;
                let a_right = total_a - a_left;
                best = best.max(a_left + b_right).max(b_left + a_right);
            }
            if m == proj.len() {
                break;
            }
            if proj[m].1 {
                a_left += 1;
            } else {
                b_left += 1;
            }
            m += 1;
        }
        if best == total {
            break;
        }
    }
    best as f64 / total as f64
}

/// Pairwise linear separability of tagged classes on the first two coordinates.
pub fn class_separation(embedding: &Embedding, tags: &[String]) -> Result<SeparationReport> {
    if tags.len() != embedding.coords.len() {
        return Err(Error::Validation(format!(
            "{} tags for {} embedded points",
            tags.len(),
            embedding.coords.len()
        )));
    }
    let mut classes: Vec<&String> = Vec::new();
    for t in tags {
        if !classes.contains(&t) {
            classes.push(t);
        }
    }
    let point = |i: usize| {
        let c = &embedding.coords[i];
        [c.first().copied().unwrap_or(0.0), c.get(1).copied().unwrap_or(0.0)]
    };
    let mut pairs = Vec::new();
    for (ia, ca) in classes.iter().enumerate() {
        for cb in &classes[ia + 1..] {
            let a: Vec<[f64; 2]> = (0..tags.len()).filter(|&i| &tags[i] == *ca).map(point).collect();
            let b: Vec<[f64; 2]> = (0..tags.len()).filter(|&i| &tags[i] == *cb).map(point).collect();
            let accuracy = linear_separation_accuracy(&a, &b);
            pairs.push(PairSeparation {
                class_a: (*ca).clone(),
                class_b: (*cb).clone(),
                accuracy,
                separable: accuracy == 1.0,
            });
        }
    }
    let min_accuracy = pairs.iter().map(|p| p.accuracy).fold(1.0, f64::min);
    Ok(SeparationReport {
        degenerate: classes.len() < 2,
        pairs,
        min_accuracy,
    })
}

/// Fraction of class pairs whose values on a single coordinate are separated by a threshold.
pub fn component_separation(embedding: &Embedding, tags: &[String], component: usize) -> f64 {
    let mut classes: Vec<&String> = Vec::new();
    for t in tags {
        if !classes.contains(&t) {
            classes.push(t);
        }
    }
    let mut separated = 0;
    let mut total = 0;
    for (ia, ca) in classes.iter().enumerate() {
        for cb in &classes[ia + 1..] {
            let vals = |c: &String| -> Vec<f64> {
                (0..tags.len()).filter(|&i| &tags[i] == c).map(|i| embedding.coords[i][component]).collect()
            };
            let (va, vb) = (vals(ca), vals(cb));
            let (amin, amax) = va.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            let (bmin, bmax) = vb.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            total += 1;
            if amax < bmin || bmax < amin {
                separated += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        separated as f64 / total as f64
    }
}

/// Settings of the three-class Fourier dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeClassParams {
    pub per_class: usize,
    /// Magnitude of the class offsets on the 3rd and 4th coefficients.
    pub offset: f64,
    /// Standard deviation of the per-shape noise on those coefficients.
    pub noise: f64,
    pub seed: u64,
}

impl Default for ThreeClassParams {
    fn default() -> Self {
        ThreeClassParams {
            per_class: 10,
            offset: 0.05,
            noise: 0.01,
            seed: 2024,
        }
    }
}

/// Shapes sharing one random smooth base, whose classes differ in the 3rd and
/// 4th Fourier coefficients. Class `c` shifts `z_3` by `offset * w^c` and
/// `z_4` by `offset * w^{2c}` with `w = exp(2 pi i / 3)`; each shape adds
/// independent complex noise to both. Returns `(label, class, coeffs)`.
pub fn three_class_coeffs(params: &ThreeClassParams) -> Vec<(String, String, FourierCoeffs)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let base = FourierCoeffs::random_smooth(&mut rng);
    let normal = Normal::new(0.0, params.noise.max(0.0)).expect("finite noise");
    let mut out = Vec::with_capacity(3 * params.per_class);
    for class in 0..3 {
        let w3 = Complex::from_polar(params.offset, std::f64::consts::TAU * class as f64 / 3.0);
        let w4 = Complex::from_polar(params.offset, 2.0 * std::f64::consts::TAU * class as f64 / 3.0);
        for i in 0..params.per_class {
            let mut c = base.clone();
            let n3 = Complex::new(normal.sample(&mut rng), normal.sample(&mut rng));
            let n4 = Complex::new(normal.sample(&mut rng), normal.sample(&mut rng));
            c.set(3, base.get(3) + w3 + n3);
            c.set(4, base.get(4) + w4 + n4);
            out.push((format!("{}", class * params.per_class + i), format!("class{class}"), c));
        }
    }
    out
}

/// The fish family `phi(t; a) = phi_1(t) + a phi_2(t)`, `a` evenly spaced in `[0, 1]`.
///
/// `phi_1` is a fixed fish-like outline (elongated body with a notched tail)
/// and `phi_2` a fixed deformation that bends the body and swells the tail.
pub fn fish_family(count: usize) -> Vec<(f64, FourierCoeffs)> {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let phi1 = FourierCoeffs::new()
        .with(1, c(0.45, 0.0))
        .with(-1, c(0.2, 0.0))
        .with(2, c(0.04, 0.02))
        .with(-2, c(0.09, 0.0))
        .with(3, c(0.0, 0.03))
        .with(-3, c(-0.05, 0.0))
        .with(4, c(0.015, 0.0))
        .with(-4, c(0.0, -0.02))
        .with(5, c(-0.01, 0.0))
        .with(-5, c(0.012, 0.006));
    let phi2 = FourierCoeffs::new()
        .with(0, c(0.0, 0.05))
        .with(2, c(0.0, -0.03))
        .with(-2, c(0.02, 0.0))
        .with(-3, c(0.0, 0.025))
        .with(4, c(0.01, -0.01));
    (0..count)
        .map(|i| {
            let a = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            let mut f = phi1.clone();
            for k in -5..=5 {
                let v = phi1.get(k) + phi2.get(k) * a;
                if v != Complex::new(0.0, 0.0) {
                    f.set(k, v);
                }
            }
            (a, f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn dataset(rows: Vec<Vec<f64>>) -> ShapeDataset {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        ShapeDataset::new(labels, rows).unwrap()
    }

    #[test]
    fn collinear_points_have_one_component() {
        let rows = (0..6).map(|i| vec![i as f64, 2.0 * i as f64, -(i as f64)]).collect();
        let e = pca(&dataset(rows), 2).unwrap();
        assert!(e.explained_variance[1].abs() < 1e-10);
        assert!(e.coords.iter().all(|c| c[1].abs() < 1e-10));
        assert!(e.stress < 1e-20);
        let mean0: f64 = e.coords.iter().map(|c| c[0]).sum::<f64>();
        assert!(mean0.abs() < 1e-12);
    }

    #[test]
    fn pca_is_permutation_invariant_and_signed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<Vec<f64>> = (0..7).map(|_| (0..5).map(|_| rng.random::<f64>()).collect()).collect();
        let e1 = pca(&dataset(rows.clone()), 2).unwrap();
        let perm = [3, 0, 6, 1, 5, 2, 4];
        let rows2: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let e2 = pca(&dataset(rows2), 2).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            for c in 0..2 {
                assert!((e1.coords[i][c] - e2.coords[k][c]).abs() < 1e-10);
            }
        }
        assert!(pca(&dataset(rows.clone()), 7).is_err());
        assert!(pca(&dataset(rows[..1].to_vec()), 1).is_err());
    }

    #[test]
    fn duplicated_rows_coincide() {
        let rows = vec![vec![1.0, 0.0, 2.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 2.0], vec![0.5, 0.5, 3.0]];
        let e = pca(&dataset(rows), 2).unwrap();
        assert!((e.coords[0][0] - e.coords[2][0]).abs() < 1e-12);
        assert!((e.coords[0][1] - e.coords[2][1]).abs() < 1e-12);
    }

    #[test]
    fn mds_recovers_planar_configuration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
        let d = euclidean_distances(&pts);
        let init_coords: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| vec![p[0] + 0.1 * rng.random::<f64>(), p[1] + 0.1 * rng.random::<f64>()])
            .collect();
        let init = Embedding {
            stress: stress(&d, &init_coords),
            coords: init_coords,
            method: EmbeddingMethod::Pca,
            explained_variance: vec![],
            stress_history: vec![],
        };
        let e = mds_stress(&d, &init, 500, 1e-14).unwrap();
        assert!(e.stress <= 1e-8, "{}", e.stress);
        assert!(e.stress_history.windows(2).all(|w| w[1] <= w[0]));
        assert!(e.stress <= init.stress);
        // rigid motion leaves stress unchanged
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let moved: Vec<Vec<f64>> = e.coords.iter().map(|p| vec![c * p[0] - s * p[1] + 2.0, s * p[0] + c * p[1] - 1.0]).collect();
        assert!((stress(&d, &moved) - e.stress).abs() < 1e-10);
    }

    #[test]
    fn mds_rejects_asymmetric_input() {
        let d = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        let init = Embedding {
            coords: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            stress: 0.0,
            method: EmbeddingMethod::Pca,
            explained_variance: vec![],
            stress_history: vec![],
        };
        assert!(matches!(mds_stress(&d, &init, 10, 1e-10), Err(Error::Validation(_))));
        let d = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        assert!(mds_stress(&d, &init, 10, 1e-10).is_err());
    }

    #[test]
    fn separation_of_blobs_and_interleaved_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let normal = Normal::new(0.0, 0.1).unwrap();
        let centres = [(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)];
        let mut coords = Vec::new();
        let mut tags = Vec::new();
        for (c, &(x, y)) in centres.iter().enumerate() {
            for _ in 0..10 {
                coords.push(vec![x + normal.sample(&mut rng), y + normal.sample(&mut rng)]);
                tags.push(format!("c{c}"));
            }
        }
        let e = Embedding {
            coords,
            stress: 0.0,
            method: EmbeddingMethod::Pca,
            explained_variance: vec![],
            stress_history: vec![],
        };
        let r = class_separation(&e, &tags).unwrap();
        assert_eq!(r.pairs.len(), 3);
        assert_eq!(r.min_accuracy, 1.0);
        assert!(!r.degenerate);
        // XOR layout is not linearly separable: best line gets 3 of 4
        let xor = linear_separation_accuracy(&[[0.0, 0.0], [1.0, 1.0]], &[[1.0, 0.0], [0.0, 1.0]]);
        assert!((xor - 0.75).abs() < 1e-12);
        let one = class_separation(&e, &vec!["x".to_string(); 30]).unwrap();
        assert!(one.degenerate && one.min_accuracy == 1.0);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = three_class_coeffs(&ThreeClassParams::default());
        let b = three_class_coeffs(&ThreeClassParams::default());
        assert_eq!(a.len(), 30);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.2.get(3), y.2.get(3));
        }
        let f = fish_family(5);
        assert_eq!(f.len(), 5);
        assert_eq!(f[0].1.get(0), Complex::new(0.0, 0.0));
        assert!((f[4].1.get(0).im - 0.05).abs() < 1e-15);
    }
}
