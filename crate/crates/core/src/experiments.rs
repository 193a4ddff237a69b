//! Named experiment presets.
//!
//! Every preset is a pure function of its [`ExperimentConfig`]: it returns a
//! typed result, a set of CSV artifacts and a JSON summary. Writing to disk
//! is left to [`write_output`], which also echoes the config and a manifest
//! describing the columns of every artifact.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::convergence::{loglog_slope, observed_order, richardson, successive_differences};
use crate::currents::{evaluate_current, parametric_current, CurrentVector, QuadratureRule};
use crate::curve::{self, FourierCoeffs, SampledCurve};
use crate::embed::{self, class_separation, component_separation, mds_stress, pca, Embedding, ShapeDataset, ThreeClassParams};
use crate::error::{Error, Result};
use crate::femspace::{build_space, FormSpace, GramOperator, SpaceDescriptor, DEFAULT_SIGMA};
use crate::geometry::{Point, Rect};
use crate::metric::{self, distance_matrix, dual_norm, whiten_all};
use crate::reconstruct::{self, CellJumps, IntervalMoments};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Reparam,
    QuadConvergence,
    NoiseRobustness,
    RoughShapes,
    MetricConvergence,
    WigglyTable,
    SupercircleNorms,
    SupercirclePca,
    RandomShapesMds,
    FishFamily,
    ThreeClassPca,
    LineDistance,
    RepresenterField,
    ReconstructConvergence,
}

impl Preset {
    pub const ALL: [Preset; 14] = [
        Preset::Reparam,
        Preset::QuadConvergence,
        Preset::NoiseRobustness,
        Preset::RoughShapes,
        Preset::MetricConvergence,
        Preset::WigglyTable,
        Preset::SupercircleNorms,
        Preset::SupercirclePca,
        Preset::RandomShapesMds,
        Preset::FishFamily,
        Preset::ThreeClassPca,
        Preset::LineDistance,
        Preset::RepresenterField,
        Preset::ReconstructConvergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Reparam => "reparam",
            Preset::QuadConvergence => "quad-convergence",
            Preset::NoiseRobustness => "noise-robustness",
            Preset::RoughShapes => "rough-shapes",
            Preset::MetricConvergence => "metric-convergence",
            Preset::WigglyTable => "wiggly-table",
            Preset::SupercircleNorms => "supercircle-norms",
            Preset::SupercirclePca => "supercircle-pca",
            Preset::RandomShapesMds => "random-shapes-mds",
            Preset::FishFamily => "fish-family",
            Preset::ThreeClassPca => "three-class-pca",
            Preset::LineDistance => "line-distance",
            Preset::RepresenterField => "representer-field",
            Preset::ReconstructConvergence => "reconstruct-convergence",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.name()).collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            Error::Configuration(format!("unknown preset '{s}'; expected one of: {}", Self::names().join(", ")))
        })
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub space: SpaceDescriptor,
    pub sigma: f64,
    pub s: u32,
    pub rule: QuadratureRule,
    pub points: usize,
    pub seed: u64,
    /// Mesh sequence for refinement studies.
    #[serde(default)]
    pub meshes: Vec<usize>,
    /// Element degrees for refinement studies.
    #[serde(default)]
    pub degrees: Vec<usize>,
    /// Monte Carlo trials.
    #[serde(default)]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// The default settings of a preset.
    pub fn preset(preset: Preset) -> Self {
        let base = ExperimentConfig {
            preset,
            space: SpaceDescriptor::lagrange(10, 1),
            sigma: DEFAULT_SIGMA,
            s: 1,
            rule: QuadratureRule::Midpoint,
            points: 512,
            seed: 1,
            meshes: Vec::new(),
            degrees: Vec::new(),
            trials: 0,
            out: None,
        };
        match preset {
            Preset::Reparam => ExperimentConfig { seed: 7, ..base },
            Preset::QuadConvergence => ExperimentConfig {
                space: SpaceDescriptor::monomial(4),
                points: 16,
                seed: 3,
                ..base
            },
            Preset::NoiseRobustness => ExperimentConfig {
                // the unit segment ends on the boundary of [-1, 1]^2
                space: SpaceDescriptor::monomial(4).with_domain(Rect::new(-0.5, 1.5, -1.0, 1.0)),
                points: 101,
                seed: 11,
                trials: 400,
                ..base
            },
            Preset::RoughShapes => ExperimentConfig {
                space: SpaceDescriptor::monomial(4),
                points: 16,
                seed: 5,
                ..base
            },
            Preset::MetricConvergence => ExperimentConfig {
                space: SpaceDescriptor::lagrange(8, 1),
                points: 5000,
                meshes: vec![8, 16, 32, 64, 128],
                degrees: vec![1, 2, 3, 4],
                ..base
            },
            Preset::WigglyTable => ExperimentConfig {
                space: SpaceDescriptor::lagrange(320, 1),
                points: 5000,
                meshes: vec![80, 160, 320],
                ..base
            },
            Preset::SupercircleNorms => ExperimentConfig {
                space: SpaceDescriptor::lagrange(80, 1),
                ..base
            },
            Preset::SupercirclePca => base,
            Preset::RandomShapesMds => ExperimentConfig {
                space: SpaceDescriptor::monomial(10),
                seed: 2017,
                ..base
            },
            Preset::FishFamily => ExperimentConfig {
                space: SpaceDescriptor::monomial(10),
                ..base
            },
            Preset::ThreeClassPca => ExperimentConfig {
                space: SpaceDescriptor::monomial(10),
                seed: 2024,
                ..base
            },
            Preset::LineDistance => ExperimentConfig {
                space: SpaceDescriptor::lagrange(320, 1).with_domain(Rect::new(-2.0, 2.0, -2.0, 2.0)),
                points: 801,
                ..base
            },
            Preset::RepresenterField => ExperimentConfig {
                space: SpaceDescriptor::monomial(10),
                seed: 4,
                ..base
            },
            Preset::ReconstructConvergence => ExperimentConfig {
                points: 4000,
                meshes: vec![10, 20, 40, 80],
                ..base
            },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    fn gram(&self) -> Result<GramOperator> {
        GramOperator::assemble(build_space(&self.space)?, self.sigma)
    }

    fn check_s(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::Configuration("Sobolev order must be at least 1".into()));
        }
        Ok(())
    }
}

/// One CSV file of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub columns: Vec<String>,
    /// Figure kind the artifact feeds, if any.
    pub figure: Option<&'static str>,
    pub contents: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub summary: Value,
    pub artifacts: Vec<Artifact>,
}

/// Accumulates a CSV table with numbers at full double precision.
struct Table {
    columns: Vec<String>,
    body: String,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            body: String::new(),
        }
    }

    fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.columns.len());
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        self.body.push_str(&line.join(","));
        self.body.push('\n');
    }

    fn finish(self, name: &str, figure: Option<&'static str>) -> Artifact {
        Artifact {
            name: name.to_string(),
            contents: format!("{}\n{}", self.columns.join(","), self.body),
            columns: self.columns,
            figure,
        }
    }
}

enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => format_f64(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

/// 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rounds every number in a JSON value to `digits` significant digits.
pub fn round_json(v: &Value, digits: usize) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => {
                let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
                json!(r)
            }
            _ => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(|x| round_json(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), round_json(x, digits))).collect()),
        _ => v.clone(),
    }
}

fn curve_artifact(name: &str, curves: &[(String, &SampledCurve)]) -> Artifact {
    let mut t = Table::new(&["label", "t", "x", "y"]);
    for (label, c) in curves {
        for (tp, p) in c.params().iter().zip(c.points()) {
            t.row(&[Cell::S(label.clone()), Cell::F(*tp), Cell::F(p.x), Cell::F(p.y)]);
        }
    }
    t.finish(name, None)
}

fn field_grid(domain: Rect, per_side: usize) -> Vec<Point> {
    let mut grid = Vec::with_capacity(per_side * per_side);
    for j in 0..per_side {
        for i in 0..per_side {
            let fx = i as f64 / (per_side - 1) as f64;
            let fy = j as f64 / (per_side - 1) as f64;
            grid.push(Point::new(
                domain.x0 + fx * domain.width(),
                domain.y0 + fy * domain.height(),
            ));
        }
    }
    grid
}

fn field_artifact(name: &str, rep: &metric::Representer, space: &FormSpace, per_side: usize) -> Artifact {
    let grid = field_grid(space.domain(), per_side);
    let field = metric::representer_field_eval(rep, space, &grid);
    let mut t = Table::new(&["x", "y", "bx", "by"]);
    for (p, b) in grid.iter().zip(&field) {
        t.row(&[Cell::F(p.x), Cell::F(p.y), Cell::F(b.x), Cell::F(b.y)]);
    }
    t.finish(name, Some("quiver"))
}

fn embedding_artifact(name: &str, e: &Embedding, labels: &[String], classes: Option<&[String]>, figure: &'static str) -> Artifact {
    Artifact {
        name: name.to_string(),
        columns: ["label", "class", "x", "y"].iter().map(|c| c.to_string()).collect(),
        figure: Some(figure),
        contents: e.to_csv_string(labels, classes),
    }
}

fn distance_artifact(name: &str, d: &[Vec<f64>]) -> Artifact {
    Artifact {
        name: name.to_string(),
        columns: Vec::new(),
        figure: None,
        contents: metric::distance_matrix_csv(d),
    }
}

// ---------------------------------------------------------------- reparam

#[derive(Clone, Debug, Serialize)]
pub struct NormComparison {
    pub s: u32,
    pub original: f64,
    pub perturbed: f64,
    pub relative_difference: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReparamResult {
    pub sigma_t: f64,
    pub norms: Vec<NormComparison>,
    #[serde(skip)]
    pub original: SampledCurve,
    #[serde(skip)]
    pub perturbed: SampledCurve,
}

/// Norms of the bowtie before and after a random reparameterization.
pub fn reparam(cfg: &ExperimentConfig) -> Result<ReparamResult> {
    let sigma_t = 0.1;
    let g = cfg.gram()?;
    let original = curve::bowtie(cfg.points)?;
    let perturbed = curve::reparameterize(&original, sigma_t, cfg.seed)?;
    let f0 = evaluate_current(&original, g.space(), cfg.rule)?;
    let f1 = evaluate_current(&perturbed, g.space(), cfg.rule)?;
    let mut norms = Vec::new();
    for s in [1, 2] {
        let a = dual_norm(&f0, &g, s)?;
        let b = dual_norm(&f1, &g, s)?;
        norms.push(NormComparison {
            s,
            original: a,
            perturbed: b,
            relative_difference: (a - b).abs() / a,
        });
    }
    Ok(ReparamResult {
        sigma_t,
        norms,
        original,
        perturbed,
    })
}

fn reparam_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = reparam(cfg)?;
    let g = cfg.gram()?;
    let mut t = Table::new(&["s", "norm_original", "norm_perturbed", "relative_difference"]);
    for n in &r.norms {
        t.row(&[Cell::I(n.s as i64), Cell::F(n.original), Cell::F(n.perturbed), Cell::F(n.relative_difference)]);
    }
    let mut artifacts = vec![t.finish("reparam_norms.csv", None)];
    for (name, c) in [("original", &r.original), ("perturbed", &r.perturbed)] {
        let f = evaluate_current(c, g.space(), cfg.rule)?;
        let rep = metric::representer(&f, &g, cfg.s.max(1))?;
        artifacts.push(field_artifact(&format!("representer_{name}.csv"), &rep, g.space(), 41));
    }
    artifacts.push(curve_artifact(
        "reparam_curves.csv",
        &[("original".into(), &r.original), ("perturbed".into(), &r.perturbed)],
    ));
    Ok((serde_json::to_value(&r)?, artifacts))
}

// ------------------------------------------------------- quad-convergence

#[derive(Clone, Debug, Serialize)]
pub struct QuadRow {
    pub points: usize,
    pub ds: f64,
    pub midpoint_error: f64,
    pub simpson_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadConvergence {
    pub rows: Vec<QuadRow>,
    pub midpoint_slope: f64,
    pub simpson_slope: f64,
}

fn monomial_space(desc: &SpaceDescriptor) -> Result<crate::femspace::MonomialSpace> {
    match build_space(desc)? {
        FormSpace::Monomial(m) => Ok(m),
        FormSpace::Lagrange(_) => Err(Error::Configuration(
            "this preset needs a monomial space (use --monomial N)".into(),
        )),
    }
}

fn relative_current_error(f: &CurrentVector, reference: &CurrentVector) -> Result<f64> {
    Ok(f.difference(reference)?.max_abs() / reference.max_abs())
}

/// Relative current error of polylines through `coeffs` against the exact current.
fn quadrature_errors(
    coeffs: &FourierCoeffs,
    desc: &SpaceDescriptor,
    sizes: &[usize],
    panels: usize,
) -> Result<Vec<QuadRow>> {
    let mono = monomial_space(desc)?;
    let space = build_space(desc)?;
    let reference = parametric_current(|t| (coeffs.eval(t), coeffs.eval_derivative(t)), &mono, desc.clone(), panels);
    sizes
        .par_iter()
        .map(|&n| {
            let c = curve::fourier_shape(coeffs, n)?;
            let mid = evaluate_current(&c, &space, QuadratureRule::Midpoint)?;
            let simp = evaluate_current(&c, &space, QuadratureRule::Simpson)?;
            Ok(QuadRow {
                points: n,
                ds: c.polyline_length() / n as f64,
                midpoint_error: relative_current_error(&mid, &reference)?,
                simpson_error: relative_current_error(&simp, &reference)?,
            })
        })
        .collect()
}

/// A seeded smooth shape that fits inside `domain` with margin.
fn smooth_shape_inside(rng: &mut ChaCha8Rng, domain: Rect) -> FourierCoeffs {
    loop {
        let c = FourierCoeffs::random_smooth(rng);
        if fits(&c, domain) {
            return c;
        }
    }
}

fn fits(c: &FourierCoeffs, domain: Rect) -> bool {
    let inner = Rect::new(domain.x0 + 0.02, domain.x1 - 0.02, domain.y0 + 0.02, domain.y1 - 0.02);
    (0..1024).all(|i| inner.contains(c.eval(i as f64 / 1024.0)))
}

/// Quadrature error of a smooth shape under repeated halving of the spacing.
pub fn quad_convergence(cfg: &ExperimentConfig) -> Result<QuadConvergence> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coeffs = smooth_shape_inside(&mut rng, cfg.space.domain());
    let sizes: Vec<usize> = (0..6).map(|k| cfg.points.max(4) << k).collect();
    let rows = quadrature_errors(&coeffs, &cfg.space, &sizes, 512)?;
    let ds: Vec<f64> = rows.iter().map(|r| r.ds).collect();
    let mid: Vec<f64> = rows.iter().map(|r| r.midpoint_error).collect();
    let simp: Vec<f64> = rows.iter().map(|r| r.simpson_error).collect();
    Ok(QuadConvergence {
        midpoint_slope: loglog_slope(&ds, &mid)?,
        simpson_slope: loglog_slope(&ds, &simp)?,
        rows,
    })
}

fn quad_rows_table(rows: &[QuadRow], label: Option<&str>) -> Table {
    let mut cols = vec![];
    if label.is_some() {
        cols.push("decay");
    }
    cols.extend(["points", "ds", "midpoint_error", "simpson_error"]);
    let mut t = Table::new(&cols);
    for r in rows {
        let mut cells = Vec::new();
        if let Some(l) = label {
            cells.push(Cell::S(l.to_string()));
        }
        cells.extend([Cell::I(r.points as i64), Cell::F(r.ds), Cell::F(r.midpoint_error), Cell::F(r.simpson_error)]);
        t.row(&cells);
    }
    t
}

fn quad_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = quad_convergence(cfg)?;
    let t = quad_rows_table(&r.rows, None);
    Ok((serde_json::to_value(&r)?, vec![t.finish("quad_convergence.csv", Some("loglog"))]))
}

// ------------------------------------------------------- noise-robustness

#[derive(Clone, Debug, Serialize)]
pub struct NoiseRow {
    pub points: usize,
    pub ds: f64,
    pub eps: f64,
    /// Root mean square over trials of the Euclidean norm of the current change.
    pub current_error_std: f64,
    /// Mean polyline length minus 1.
    pub arclength_bias: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoiseRobustness {
    pub rows: Vec<NoiseRow>,
    pub trials: usize,
    /// Slopes in `eps` at `points` samples.
    pub current_slope: f64,
    pub arclength_slope: f64,
}

pub const NOISE_LEVELS: [f64; 5] = [1e-4, 2e-4, 5e-4, 1e-3, 2e-3];

fn noise_row(cfg: &ExperimentConfig, space: &FormSpace, n: usize, eps: f64, level: usize, trials: usize) -> Result<NoiseRow> {
    let clean = curve::segment_line(n)?;
    let f_clean = evaluate_current(&clean, space, cfg.rule)?;
    let mut sq = 0.0;
    let mut len = 0.0;
    for trial in 0..trials {
        let seed = cfg
            .seed
            .wrapping_mul(1_000_003)
            .wrapping_add((n as u64) << 32)
            .wrapping_add((level as u64) << 20)
            .wrapping_add(trial as u64);
        let noisy = curve::add_noise(&clean, eps, seed, true)?;
        let f = evaluate_current(&noisy, space, cfg.rule)?;
        let d = f.difference(&f_clean)?;
        sq += d.concatenated().iter().map(|v| v * v).sum::<f64>();
        len += noisy.polyline_length();
    }
    Ok(NoiseRow {
        points: n,
        ds: 1.0 / (n - 1) as f64,
        eps,
        current_error_std: (sq / trials as f64).sqrt(),
        arclength_bias: len / trials as f64 - 1.0,
    })
}

/// Monte Carlo study of the unit segment under coordinate noise.
pub fn noise_robustness(cfg: &ExperimentConfig) -> Result<NoiseRobustness> {
    let space = build_space(&cfg.space)?;
    let trials = cfg.trials.max(1);
    let sizes = [11, 21, 51, cfg.points.max(2), 201];
    let mut sizes: Vec<usize> = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..NOISE_LEVELS.len()).map(move |l| (n, l)))
        .collect();
    let rows: Vec<NoiseRow> = jobs
        .par_iter()
        .map(|&(n, l)| noise_row(cfg, &space, n, NOISE_LEVELS[l], l, trials))
        .collect::<Result<_>>()?;
    let at: Vec<&NoiseRow> = rows.iter().filter(|r| r.points == cfg.points.max(2)).collect();
    let eps: Vec<f64> = at.iter().map(|r| r.eps).collect();
    let cur: Vec<f64> = at.iter().map(|r| r.current_error_std).collect();
    let bias: Vec<f64> = at.iter().map(|r| r.arclength_bias.abs()).collect();
    Ok(NoiseRobustness {
        current_slope: loglog_slope(&eps, &cur)?,
        arclength_slope: loglog_slope(&eps, &bias)?,
        trials,
        rows,
    })
}

fn noise_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = noise_robustness(cfg)?;
    let mut t = Table::new(&["points", "ds", "eps", "current_error_std", "arclength_bias"]);
    for row in &r.rows {
        t.row(&[
            Cell::I(row.points as i64),
            Cell::F(row.ds),
            Cell::F(row.eps),
            Cell::F(row.current_error_std),
            Cell::F(row.arclength_bias),
        ]);
    }
    Ok((serde_json::to_value(&r)?, vec![t.finish("noise_robustness.csv", Some("loglog"))]))
}

// ----------------------------------------------------------- rough-shapes

#[derive(Clone, Debug, Serialize)]
pub struct RoughClass {
    pub decay: f64,
    pub rows: Vec<QuadRow>,
    pub midpoint_slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoughShapes {
    pub classes: Vec<RoughClass>,
    #[serde(skip)]
    pub curves: Vec<SampledCurve>,
}

pub const ROUGH_DECAYS: [f64; 3] = [1.5, 2.0, 3.0];

/// Quadrature error vs point count for shapes with slowly decaying spectra.
pub fn rough_shapes(cfg: &ExperimentConfig) -> Result<RoughShapes> {
    let kmax = 128;
    let mut classes = Vec::new();
    let mut curves = Vec::new();
    for (i, &decay) in ROUGH_DECAYS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        let coeffs = loop {
            let c = FourierCoeffs::random_decaying(&mut rng, 0.5, decay, kmax, 0.08);
            if fits(&c, cfg.space.domain()) {
                break c;
            }
        };
        let sizes: Vec<usize> = (0..9).map(|k| cfg.points.max(4) << k).collect();
        let rows = quadrature_errors(&coeffs, &cfg.space, &sizes, 8 * kmax as usize)?;
        let ds: Vec<f64> = rows.iter().map(|r| r.ds).collect();
        let mid: Vec<f64> = rows.iter().map(|r| r.midpoint_error).collect();
        curves.push(curve::fourier_shape(&coeffs, 1024)?);
        classes.push(RoughClass {
            decay,
            midpoint_slope: loglog_slope(&ds, &mid)?,
            rows,
        });
    }
    Ok(RoughShapes { classes, curves })
}

fn rough_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = rough_shapes(cfg)?;
    let mut t = Table::new(&["decay", "points", "ds", "midpoint_error", "simpson_error"]);
    for c in &r.classes {
        for row in &c.rows {
            t.row(&[
                Cell::F(c.decay),
                Cell::I(row.points as i64),
                Cell::F(row.ds),
                Cell::F(row.midpoint_error),
                Cell::F(row.simpson_error),
            ]);
        }
    }
    let labelled: Vec<(String, &SampledCurve)> = r
        .classes
        .iter()
        .zip(&r.curves)
        .map(|(c, s)| (format!("decay{}", c.decay), s))
        .collect();
    Ok((
        serde_json::to_value(&r)?,
        vec![t.finish("rough_shapes.csv", Some("loglog")), curve_artifact("rough_curves.csv", &labelled)],
    ))
}

// ----------------------------------------------------- metric-convergence

#[derive(Clone, Debug, Serialize)]
pub struct MetricSeries {
    pub degree: usize,
    pub meshes: Vec<usize>,
    pub h1_norms: Vec<f64>,
    pub h2_norms: Vec<f64>,
    pub h1_differences: Vec<f64>,
    pub h2_differences: Vec<f64>,
    pub h1_slope: f64,
    pub h2_slope: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricConvergence {
    pub series: Vec<MetricSeries>,
}

/// Norms `(s = 1, s = 2)` of a current on one mesh.
fn norms_on(space: &SpaceDescriptor, sigma: f64, c: &SampledCurve, rule: QuadratureRule) -> Result<(f64, f64)> {
    let g = GramOperator::assemble(build_space(space)?, sigma)?;
    let f = evaluate_current(c, g.space(), rule)?;
    Ok((dual_norm(&f, &g, 1)?, dual_norm(&f, &g, 2)?))
}

/// Successive-difference convergence of the circle's norms under mesh refinement.
pub fn metric_convergence(cfg: &ExperimentConfig) -> Result<MetricConvergence> {
    let circle = curve::circle(0.5, cfg.points)?;
    let domain = cfg.space.domain();
    let degrees = if cfg.degrees.is_empty() { vec![1] } else { cfg.degrees.clone() };
    let mut series = Vec::new();
    for &degree in &degrees {
        let norms: Vec<(f64, f64)> = cfg
            .meshes
            .iter()
            .map(|&m| norms_on(&SpaceDescriptor::lagrange(m, degree).with_domain(domain), cfg.sigma, &circle, cfg.rule))
            .collect::<Result<_>>()?;
        let h1: Vec<f64> = norms.iter().map(|n| n.0).collect();
        let h2: Vec<f64> = norms.iter().map(|n| n.1).collect();
        let d1 = successive_differences(&h1);
        let d2 = successive_differences(&h2);
        let ms: Vec<f64> = cfg.meshes.iter().skip(1).map(|&m| m as f64).collect();
        series.push(MetricSeries {
            degree,
            meshes: cfg.meshes.clone(),
            h1_slope: loglog_slope(&ms, &d1).unwrap_or(f64::NAN),
            h2_slope: loglog_slope(&ms, &d2).unwrap_or(f64::NAN),
            h1_norms: h1,
            h2_norms: h2,
            h1_differences: d1,
            h2_differences: d2,
        });
    }
    Ok(MetricConvergence { series })
}

fn metric_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = metric_convergence(cfg)?;
    let mut norms = Table::new(&["degree", "M", "h1_norm", "h2_norm"]);
    let mut diffs = Table::new(&["degree", "M", "h1_difference", "h2_difference"]);
    for s in &r.series {
        for (i, &m) in s.meshes.iter().enumerate() {
            norms.row(&[Cell::I(s.degree as i64), Cell::I(m as i64), Cell::F(s.h1_norms[i]), Cell::F(s.h2_norms[i])]);
            if i > 0 {
                diffs.row(&[
                    Cell::I(s.degree as i64),
                    Cell::I(m as i64),
                    Cell::F(s.h1_differences[i - 1]),
                    Cell::F(s.h2_differences[i - 1]),
                ]);
            }
        }
    }
    Ok((
        serde_json::to_value(&r)?,
        vec![
            norms.finish("metric_convergence_norms.csv", None),
            diffs.finish("metric_convergence.csv", Some("loglog")),
        ],
    ))
}

// ------------------------------------------------------------ wiggly-table

pub const WIGGLY_OMEGAS: [u32; 6] = [2, 4, 8, 16, 32, 64];
pub const WIGGLY_EPS: [f64; 3] = [0.1, 0.05, 0.025];

#[derive(Clone, Debug, Serialize)]
pub struct WigglyEntry {
    pub omega: u32,
    pub eps: f64,
    /// Raw distances per mesh.
    pub h1_raw: Vec<f64>,
    pub h2_raw: Vec<f64>,
    /// Extrapolated distances.
    pub h1: f64,
    pub h2: f64,
    /// Observed orders from the three finest meshes, when defined.
    pub h1_order: Option<f64>,
    pub h2_order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WigglyTable {
    pub meshes: Vec<usize>,
    pub extrapolation_order: f64,
    pub entries: Vec<WigglyEntry>,
}

impl WigglyTable {
    pub fn get(&self, omega: u32, eps: f64) -> Option<&WigglyEntry> {
        self.entries.iter().find(|e| e.omega == omega && e.eps == eps)
    }
}

/// Order used to extrapolate the wiggly distances for both metrics.
pub const WIGGLY_EXTRAPOLATION_ORDER: f64 = 1.0;

/// Distances between the circle and its wiggly perturbations, extrapolated in the mesh size.
pub fn wiggly_table(cfg: &ExperimentConfig) -> Result<WigglyTable> {
    if cfg.meshes.len() < 2 {
        return Err(Error::Configuration("the wiggly table needs at least two meshes".into()));
    }
    let domain = cfg.space.domain();
    let circle = curve::circle(0.5, cfg.points)?;
    let jobs: Vec<(u32, f64)> = WIGGLY_OMEGAS
        .iter()
        .flat_map(|&w| WIGGLY_EPS.iter().map(move |&e| (w, e)))
        .collect();
    let wiggles: Vec<SampledCurve> = jobs
        .iter()
        .map(|&(w, e)| curve::wiggly_circle(e, w, cfg.points))
        .collect::<Result<_>>()?;
    let mut raw = vec![(Vec::new(), Vec::new()); jobs.len()];
    for &m in &cfg.meshes {
        let g = GramOperator::assemble(build_space(&SpaceDescriptor::lagrange(m, 1).with_domain(domain))?, cfg.sigma)?;
        let f0 = evaluate_current(&circle, g.space(), cfg.rule)?;
        let d: Vec<(f64, f64)> = wiggles
            .par_iter()
            .map(|c| {
                let f = evaluate_current(c, g.space(), cfg.rule)?;
                let diff = f.difference(&f0)?;
                Ok((dual_norm(&diff, &g, 1)?, dual_norm(&diff, &g, 2)?))
            })
            .collect::<Result<_>>()?;
        for (k, (a, b)) in d.into_iter().enumerate() {
            raw[k].0.push(a);
            raw[k].1.push(b);
        }
    }
    let p = WIGGLY_EXTRAPOLATION_ORDER;
    let entries = jobs
        .iter()
        .zip(raw)
        .map(|(&(omega, eps), (h1_raw, h2_raw))| {
            let n = h1_raw.len();
            let ratio = cfg.meshes[n - 1] as f64 / cfg.meshes[n - 2] as f64;
            let order = |v: &[f64]| if n >= 3 { observed_order(v[n - 3], v[n - 2], v[n - 1], ratio) } else { None };
            WigglyEntry {
                omega,
                eps,
                h1: richardson(h1_raw[n - 2], h1_raw[n - 1], ratio, p),
                h2: richardson(h2_raw[n - 2], h2_raw[n - 1], ratio, p),
                h1_order: order(&h1_raw),
                h2_order: order(&h2_raw),
                h1_raw,
                h2_raw,
            }
        })
        .collect();
    Ok(WigglyTable {
        meshes: cfg.meshes.clone(),
        extrapolation_order: p,
        entries,
    })
}

/// Log-log slopes of a wiggly table.
#[derive(Clone, Debug, Serialize)]
pub struct WigglyScaling {
    /// Per frequency, slope of the distance in `eps`.
    pub h1_eps_slopes: Vec<f64>,
    pub h2_eps_slopes: Vec<f64>,
    /// Per amplitude, slope of the distance in `omega`.
    pub h1_omega_slopes: Vec<f64>,
    /// Per amplitude, slope in `omega` over the three highest frequencies.
    pub h2_omega_slopes_high: Vec<f64>,
}

/// Scaling slopes of a 6 x 3 table indexed as `[omega][eps]` for each metric.
pub fn wiggly_scaling(h1: &[[f64; 3]; 6], h2: &[[f64; 3]; 6]) -> WigglyScaling {
    let eps = WIGGLY_EPS;
    let omegas: Vec<f64> = WIGGLY_OMEGAS.iter().map(|&w| w as f64).collect();
    let slope = |x: &[f64], y: &[f64]| loglog_slope(x, y).unwrap_or(f64::NAN);
    WigglyScaling {
        h1_eps_slopes: h1.iter().map(|row| slope(&eps, row)).collect(),
        h2_eps_slopes: h2.iter().map(|row| slope(&eps, row)).collect(),
        h1_omega_slopes: (0..3).map(|j| slope(&omegas, &h1.iter().map(|r| r[j]).collect::<Vec<_>>())).collect(),
        h2_omega_slopes_high: (0..3)
            .map(|j| slope(&omegas[3..], &h2[3..].iter().map(|r| r[j]).collect::<Vec<_>>()))
            .collect(),
    }
}

impl WigglyTable {
    pub fn grids(&self) -> ([[f64; 3]; 6], [[f64; 3]; 6]) {
        let mut h1 = [[0.0; 3]; 6];
        let mut h2 = [[0.0; 3]; 6];
        for (i, &w) in WIGGLY_OMEGAS.iter().enumerate() {
            for (j, &e) in WIGGLY_EPS.iter().enumerate() {
                if let Some(entry) = self.get(w, e) {
                    h1[i][j] = entry.h1;
                    h2[i][j] = entry.h2;
                }
            }
        }
        (h1, h2)
    }

    pub fn scaling(&self) -> WigglyScaling {
        let (h1, h2) = self.grids();
        wiggly_scaling(&h1, &h2)
    }
}

fn wiggly_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = wiggly_table(cfg)?;
    let mut t = Table::new(&["omega", "eps", "h1_distance", "h2_distance"]);
    let mut raw = Table::new(&["M", "omega", "eps", "h1_distance", "h2_distance"]);
    for e in &r.entries {
        t.row(&[Cell::I(e.omega as i64), Cell::F(e.eps), Cell::F(e.h1), Cell::F(e.h2)]);
        for (k, &m) in r.meshes.iter().enumerate() {
            raw.row(&[Cell::I(m as i64), Cell::I(e.omega as i64), Cell::F(e.eps), Cell::F(e.h1_raw[k]), Cell::F(e.h2_raw[k])]);
        }
    }
    let example = curve::wiggly_circle(0.05, 32, 2000)?;
    let circle = curve::circle(0.5, 2000)?;
    let mut summary = serde_json::to_value(&r)?;
    summary["scaling"] = serde_json::to_value(r.scaling())?;
    Ok((
        summary,
        vec![
            t.finish("wiggly_table.csv", Some("table-heatmap")),
            raw.finish("wiggly_raw.csv", None),
            curve_artifact("wiggly_curves.csv", &[("circle".into(), &circle), ("eps0.05_omega32".into(), &example)]),
        ],
    ))
}

// ------------------------------------------------------- supercircle-norms

pub const SUPERCIRCLE_EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 2.5];

#[derive(Clone, Debug, Serialize)]
pub struct SupercircleNorms {
    /// `r = 2^j` for each listed `j`.
    pub log2_r: Vec<f64>,
    pub h1_norms: Vec<f64>,
    pub h2_norms: Vec<f64>,
}

/// Norms of supercircles `|x|^r + |y|^r = 2^{-r}` for `r = 2, 2^1.5, 4, 2^2.5`.
pub fn supercircle_norms(cfg: &ExperimentConfig) -> Result<SupercircleNorms> {
    let g = cfg.gram()?;
    let norms: Vec<(f64, f64)> = SUPERCIRCLE_EXPONENTS
        .par_iter()
        .map(|&j| {
            let c = curve::supercircle(2f64.powf(j), cfg.points)?;
            let f = evaluate_current(&c, g.space(), cfg.rule)?;
            Ok((dual_norm(&f, &g, 1)?, dual_norm(&f, &g, 2)?))
        })
        .collect::<Result<_>>()?;
    Ok(SupercircleNorms {
        log2_r: SUPERCIRCLE_EXPONENTS.to_vec(),
        h1_norms: norms.iter().map(|n| n.0).collect(),
        h2_norms: norms.iter().map(|n| n.1).collect(),
    })
}

fn supercircle_norms_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = supercircle_norms(cfg)?;
    let g = cfg.gram()?;
    let mut t = Table::new(&["r", "h1_norm", "h2_norm"]);
    let mut artifacts = Vec::new();
    let mut curves = Vec::new();
    for (i, &j) in r.log2_r.iter().enumerate() {
        let rr = 2f64.powf(j);
        t.row(&[Cell::F(rr), Cell::F(r.h1_norms[i]), Cell::F(r.h2_norms[i])]);
        let c = curve::supercircle(rr, cfg.points)?;
        let f = evaluate_current(&c, g.space(), cfg.rule)?;
        let rep = metric::representer(&f, &g, cfg.s.max(1))?;
        artifacts.push(field_artifact(&format!("representer_r{j}.csv"), &rep, g.space(), 41));
        curves.push((format!("r{j}"), c));
    }
    artifacts.insert(0, t.finish("supercircle_norms.csv", None));
    let refs: Vec<(String, &SampledCurve)> = curves.iter().map(|(l, c)| (l.clone(), c)).collect();
    artifacts.push(curve_artifact("supercircle_curves.csv", &refs));
    Ok((serde_json::to_value(&r)?, artifacts))
}

// --------------------------------------------------------- supercircle-pca

#[derive(Clone, Debug, Serialize)]
pub struct PcaSummary {
    pub explained_variance: Vec<f64>,
    pub stress: f64,
    pub mean_distance_error: f64,
    #[serde(skip)]
    pub labels: Vec<String>,
    #[serde(skip)]
    pub classes: Option<Vec<String>>,
    #[serde(skip)]
    pub embedding: Option<Embedding>,
    #[serde(skip)]
    pub distances: Vec<Vec<f64>>,
}

fn whitened_dataset(
    cfg: &ExperimentConfig,
    g: &GramOperator,
    labels: Vec<String>,
    curves: &[SampledCurve],
) -> Result<(ShapeDataset, Vec<Vec<f64>>)> {
    let currents: Vec<CurrentVector> = curves
        .par_iter()
        .map(|c| evaluate_current(c, g.space(), cfg.rule))
        .collect::<Result<_>>()?;
    let w = whiten_all(&currents, g, cfg.s)?;
    let d = distance_matrix(&w);
    Ok((ShapeDataset::from_points(labels, &w)?, d))
}

pub const SUPERCIRCLE_PCA_LOG2: [f64; 13] = [-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0];

/// Two-dimensional PCA of the supercircle family `r = 2^j`, `j = -3, -2.5, ..., 3`.
pub fn supercircle_pca(cfg: &ExperimentConfig) -> Result<PcaSummary> {
    cfg.check_s()?;
    let g = cfg.gram()?;
    let curves: Vec<SampledCurve> = SUPERCIRCLE_PCA_LOG2
        .iter()
        .map(|&j| curve::supercircle(2f64.powf(j), cfg.points))
        .collect::<Result<_>>()?;
    let labels = SUPERCIRCLE_PCA_LOG2.iter().map(|j| format!("{j}")).collect();
    let (data, d) = whitened_dataset(cfg, &g, labels, &curves)?;
    let e = pca(&data, 2)?;
    Ok(PcaSummary {
        explained_variance: e.explained_variance.clone(),
        stress: e.stress,
        mean_distance_error: e.mean_distance_error(&d),
        labels: data.labels().to_vec(),
        classes: None,
        embedding: Some(e),
        distances: d,
    })
}

fn pca_output(r: PcaSummary, name: &str, figure: &'static str) -> Result<(Value, Vec<Artifact>)> {
    let e = r.embedding.as_ref().expect("embedding present");
    let artifacts = vec![
        embedding_artifact(name, e, &r.labels, r.classes.as_deref(), figure),
        distance_artifact(&name.replace(".csv", "_distances.csv"), &r.distances),
    ];
    Ok((serde_json::to_value(&r)?, artifacts))
}

// ---------------------------------------------------- random-shapes / fish

#[derive(Clone, Debug, Serialize)]
pub struct MdsSummary {
    pub shapes: usize,
    pub pca_stress: f64,
    pub pca_mean_distance_error: f64,
    pub stress: f64,
    pub mean_distance_error: f64,
    pub iterations: usize,
    #[serde(skip)]
    pub labels: Vec<String>,
    #[serde(skip)]
    pub pca: Option<Embedding>,
    #[serde(skip)]
    pub mds: Option<Embedding>,
    #[serde(skip)]
    pub distances: Vec<Vec<f64>>,
    #[serde(skip)]
    pub curves: Vec<SampledCurve>,
}

fn mds_pipeline(cfg: &ExperimentConfig, labels: Vec<String>, curves: Vec<SampledCurve>) -> Result<MdsSummary> {
    cfg.check_s()?;
    let g = cfg.gram()?;
    let (data, d) = whitened_dataset(cfg, &g, labels, &curves)?;
    let init = pca(&data, 2)?;
    let m = mds_stress(&d, &init, 500, 1e-10)?;
    Ok(MdsSummary {
        shapes: data.len(),
        pca_stress: init.stress,
        pca_mean_distance_error: init.mean_distance_error(&d),
        stress: m.stress,
        mean_distance_error: m.mean_distance_error(&d),
        iterations: m.stress_history.len().saturating_sub(1),
        labels: data.labels().to_vec(),
        pca: Some(init),
        mds: Some(m),
        distances: d,
        curves,
    })
}

/// MDS of 32 seeded random smooth shapes.
pub fn random_shapes_mds(cfg: &ExperimentConfig) -> Result<MdsSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let curves: Vec<SampledCurve> = (0..32)
        .map(|_| curve::fourier_shape(&smooth_shape_inside(&mut rng, cfg.space.domain()), cfg.points))
        .collect::<Result<_>>()?;
    let labels = (0..32).map(|i| i.to_string()).collect();
    mds_pipeline(cfg, labels, curves)
}

pub const FISH_COUNT: usize = 11;

/// MDS of the fish family.
pub fn fish_family_mds(cfg: &ExperimentConfig) -> Result<MdsSummary> {
    let family = embed::fish_family(FISH_COUNT);
    let curves: Vec<SampledCurve> = family
        .iter()
        .map(|(_, c)| curve::fourier_shape(c, cfg.points))
        .collect::<Result<_>>()?;
    let labels = family.iter().map(|(a, _)| format!("{a}")).collect();
    mds_pipeline(cfg, labels, curves)
}

fn mds_output(r: MdsSummary, stem: &str) -> Result<(Value, Vec<Artifact>)> {
    let mut artifacts = vec![
        embedding_artifact(&format!("{stem}.csv"), r.mds.as_ref().expect("mds"), &r.labels, None, "scatter"),
        embedding_artifact(&format!("{stem}_pca.csv"), r.pca.as_ref().expect("pca"), &r.labels, None, "scatter"),
        distance_artifact(&format!("{stem}_distances.csv"), &r.distances),
    ];
    let thumbs: Vec<SampledCurve> = r.curves.iter().map(|c| downsample(c, 64)).collect::<Result<_>>()?;
    let refs: Vec<(String, &SampledCurve)> = r.labels.iter().cloned().zip(thumbs.iter()).collect();
    artifacts.push(curve_artifact(&format!("{stem}_curves.csv"), &refs));
    Ok((serde_json::to_value(&r)?, artifacts))
}

fn downsample(c: &SampledCurve, n: usize) -> Result<SampledCurve> {
    if c.len() <= n {
        return Ok(c.clone());
    }
    let step = c.len() / n;
    let params = c.params().iter().step_by(step).copied().collect();
    let points = c.points().iter().step_by(step).copied().collect();
    SampledCurve::new(params, points, c.is_closed())
}

// -------------------------------------------------------- three-class-pca

#[derive(Clone, Debug, Serialize)]
pub struct ThreeClassSummary {
    pub params: ThreeClassParams,
    pub explained_variance: Vec<f64>,
    pub separation: embed::SeparationReport,
    /// Fraction of class pairs separated by a threshold on each component.
    pub component_separation: Vec<f64>,
    #[serde(skip)]
    pub pca: PcaSummary,
}

/// PCA of three classes of shapes differing in two Fourier coefficients.
pub fn three_class_pca(cfg: &ExperimentConfig) -> Result<ThreeClassSummary> {
    cfg.check_s()?;
    let params = ThreeClassParams {
        seed: cfg.seed,
        ..ThreeClassParams::default()
    };
    let shapes = embed::three_class_coeffs(&params);
    let curves: Vec<SampledCurve> = shapes
        .iter()
        .map(|(_, _, c)| curve::fourier_shape(c, cfg.points))
        .collect::<Result<_>>()?;
    let labels: Vec<String> = shapes.iter().map(|s| s.0.clone()).collect();
    let classes: Vec<String> = shapes.iter().map(|s| s.1.clone()).collect();
    let g = cfg.gram()?;
    let (data, d) = whitened_dataset(cfg, &g, labels, &curves)?;
    let data = data.with_classes(classes.clone())?;
    let e = pca(&data, 2)?;
    let separation = class_separation(&e, &classes)?;
    let component_sep = (0..2).map(|c| component_separation(&e, &classes, c)).collect();
    Ok(ThreeClassSummary {
        params,
        explained_variance: e.explained_variance.clone(),
        separation,
        component_separation: component_sep,
        pca: PcaSummary {
            explained_variance: e.explained_variance.clone(),
            stress: e.stress,
            mean_distance_error: e.mean_distance_error(&d),
            labels: data.labels().to_vec(),
            classes: Some(classes),
            embedding: Some(e),
            distances: d,
        },
    })
}

// ----------------------------------------------------------- line-distance

pub const LINE_EPS: [f64; 3] = [0.05, 0.1, 0.2];
/// Segment lengths of the two-length estimator.
pub const LINE_LENGTHS: (f64, f64) = (0.8, 1.6);

#[derive(Clone, Debug, Serialize)]
pub struct LineDistanceRow {
    pub s: u32,
    pub eps: f64,
    /// `sqrt(sigma (d^2(L2) - d^2(L1)) / (L2 - L1))`.
    pub discrete: f64,
    /// `sqrt(sigma d^2(L2) / L2)`, including end effects.
    pub naive: f64,
    pub analytic: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineDistance {
    pub rows: Vec<LineDistanceRow>,
}

/// Distance per unit length between parallel segments, against the 1D kernels.
///
/// Squared distances of segments of two lengths are differenced so that the
/// contribution of the segment ends cancels.
pub fn line_distance(cfg: &ExperimentConfig) -> Result<LineDistance> {
    let g = cfg.gram()?;
    let (l1, l2) = LINE_LENGTHS;
    let squared = |eps: f64, len: f64, s: u32| -> Result<f64> {
        let h = len / 2.0;
        let n = cfg.points.max(2);
        let a = curve::straight_segment(Point::new(-eps / 2.0, -h), Point::new(-eps / 2.0, h), n)?;
        let b = curve::straight_segment(Point::new(eps / 2.0, -h), Point::new(eps / 2.0, h), n)?;
        let fa = evaluate_current(&a, g.space(), cfg.rule)?;
        let fb = evaluate_current(&b, g.space(), cfg.rule)?;
        Ok(metric::distance(&fa, &fb, &g, s)?.powi(2))
    };
    let jobs: Vec<(u32, f64)> = [1, 2].iter().flat_map(|&s| LINE_EPS.iter().map(move |&e| (s, e))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(s, eps)| {
            let d1 = squared(eps, l1, s)?;
            let d2 = squared(eps, l2, s)?;
            let discrete = (cfg.sigma * (d2 - d1) / (l2 - l1)).max(0.0).sqrt();
            let analytic = metric::line_distance_per_unit_length(s, eps, cfg.sigma)?;
            Ok(LineDistanceRow {
                s,
                eps,
                discrete,
                naive: (cfg.sigma * d2 / l2).sqrt(),
                analytic,
                relative_error: (discrete - analytic) / analytic,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LineDistance { rows })
}

fn line_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = line_distance(cfg)?;
    let mut t = Table::new(&["s", "eps", "discrete", "naive", "analytic", "relative_error"]);
    for row in &r.rows {
        t.row(&[
            Cell::I(row.s as i64),
            Cell::F(row.eps),
            Cell::F(row.discrete),
            Cell::F(row.naive),
            Cell::F(row.analytic),
            Cell::F(row.relative_error),
        ]);
    }
    let mut k = Table::new(&["s", "x", "kernel"]);
    for s in [1, 2] {
        for i in 0..=200 {
            let x = -5.0 + 0.05 * i as f64;
            k.row(&[Cell::I(s), Cell::F(x), Cell::F(metric::kernel_1d(s as u32, x)?)]);
        }
    }
    Ok((
        serde_json::to_value(&r)?,
        vec![t.finish("line_distance.csv", None), k.finish("kernels.csv", None)],
    ))
}

// ------------------------------------------------------- representer-field

#[derive(Clone, Debug, Serialize)]
pub struct RepresenterFieldSummary {
    pub norm: f64,
    pub max_field: f64,
    #[serde(skip)]
    pub curve: Option<SampledCurve>,
    #[serde(skip)]
    pub field: Vec<(Point, Point)>,
}

pub const FIELD_GRID: usize = 41;

/// The representer of a random smooth shape sampled on a grid.
pub fn representer_field(cfg: &ExperimentConfig) -> Result<RepresenterFieldSummary> {
    cfg.check_s()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let c = curve::fourier_shape(&smooth_shape_inside(&mut rng, cfg.space.domain()), cfg.points)?;
    let g = cfg.gram()?;
    let f = evaluate_current(&c, g.space(), cfg.rule)?;
    let rep = metric::representer(&f, &g, cfg.s)?;
    let grid = field_grid(g.space().domain(), FIELD_GRID);
    let values = metric::representer_field_eval(&rep, g.space(), &grid);
    Ok(RepresenterFieldSummary {
        norm: dual_norm(&f, &g, cfg.s)?,
        max_field: values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        curve: Some(c),
        field: grid.into_iter().zip(values).collect(),
    })
}

fn representer_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = representer_field(cfg)?;
    let mut t = Table::new(&["x", "y", "bx", "by"]);
    for (p, b) in &r.field {
        t.row(&[Cell::F(p.x), Cell::F(p.y), Cell::F(b.x), Cell::F(b.y)]);
    }
    let c = r.curve.as_ref().expect("curve present");
    Ok((
        serde_json::to_value(&r)?,
        vec![
            t.finish("representer_field.csv", Some("quiver")),
            curve_artifact("representer_curve.csv", &[("shape".into(), c)]),
        ],
    ))
}

// -------------------------------------------------- reconstruct-convergence

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructRow {
    pub mesh: usize,
    pub h: f64,
    pub cells: usize,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub h: f64,
    pub quadratic: f64,
    pub cubic: f64,
    pub quartic: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructConvergence {
    pub center: (f64, f64),
    pub rows: Vec<ReconstructRow>,
    pub slope: f64,
    pub moments: Vec<MomentRow>,
    pub moment_slopes: (f64, f64, f64),
    #[serde(skip)]
    pub reconstructions: Vec<SampledCurve>,
    #[serde(skip)]
    pub jumps: Option<CellJumps>,
}

/// Centre of the reconstruction circle, off the lattice symmetry lines.
pub const RECONSTRUCT_CENTER: (f64, f64) = (0.0371, 0.0213);

/// The moment test function on intervals.
pub fn moment_test_function(x: f64) -> f64 {
    (3.0 * x).sin() + 0.5 * (2.0 * x).exp()
}

/// Piecewise-constant reconstruction error of an off-centre circle vs mesh size,
/// together with the 1D moment solvers on shrinking intervals.
pub fn reconstruct_convergence(cfg: &ExperimentConfig) -> Result<ReconstructConvergence> {
    let (cx, cy) = RECONSTRUCT_CENTER;
    let base = curve::circle(0.5, cfg.points)?;
    let shifted: Vec<Point> = base.points().iter().map(|p| Point::new(p.x + cx, p.y + cy)).collect();
    let c = SampledCurve::new(base.params().to_vec(), shifted, true)?;
    let domain = cfg.space.domain();
    let results: Vec<(ReconstructRow, SampledCurve, CellJumps)> = cfg
        .meshes
        .par_iter()
        .map(|&m| {
            let mesh = crate::femspace::StructuredMesh::new(m, domain)?;
            let jumps = CellJumps::from_curve(&c, &mesh)?;
            let rec = reconstruct::reconstruct_pc(&jumps)?;
            let hausdorff = reconstruct::one_sided_hausdorff(&rec.crossings, &c, 8);
            Ok((
                ReconstructRow {
                    mesh: m,
                    h: mesh.hx(),
                    cells: rec.cells.len(),
                    hausdorff,
                },
                rec.to_curve()?,
                jumps,
            ))
        })
        .collect::<Result<_>>()?;
    let hs: Vec<f64> = results.iter().map(|r| r.0.h).collect();
    let errs: Vec<f64> = results.iter().map(|r| r.0.hausdorff).collect();
    let slope = loglog_slope(&hs, &errs).unwrap_or(f64::NAN);
    let moments: Vec<MomentRow> = (0..5)
        .map(|k| {
            let h = 0.5f64.powi(k);
            let m = IntervalMoments::of(moment_test_function, h);
            MomentRow {
                h,
                quadratic: reconstruct::quadratic_reconstruct(&m).max_error(moment_test_function, h, 400),
                cubic: reconstruct::cubic_reconstruct(&m).max_error(moment_test_function, h, 400),
                quartic: reconstruct::quartic_reconstruct(&m).poly.max_error(moment_test_function, h, 400),
            }
        })
        .collect();
    let mh: Vec<f64> = moments.iter().map(|r| r.h).collect();
    let sl = |v: Vec<f64>| loglog_slope(&mh, &v).unwrap_or(f64::NAN);
    let moment_slopes = (
        sl(moments.iter().map(|r| r.quadratic).collect()),
        sl(moments.iter().map(|r| r.cubic).collect()),
        sl(moments.iter().map(|r| r.quartic).collect()),
    );
    let mut rows = Vec::new();
    let mut reconstructions = Vec::new();
    let mut last = None;
    for (row, rec, jumps) in results {
        rows.push(row);
        reconstructions.push(rec);
        last = Some(jumps);
    }
    Ok(ReconstructConvergence {
        center: RECONSTRUCT_CENTER,
        rows,
        slope,
        moments,
        moment_slopes,
        reconstructions,
        jumps: last,
    })
}

fn reconstruct_output(cfg: &ExperimentConfig) -> Result<(Value, Vec<Artifact>)> {
    let r = reconstruct_convergence(cfg)?;
    let mut t = Table::new(&["M", "h", "cells", "hausdorff_error"]);
    for row in &r.rows {
        t.row(&[Cell::I(row.mesh as i64), Cell::F(row.h), Cell::I(row.cells as i64), Cell::F(row.hausdorff)]);
    }
    let mut m = Table::new(&["h", "quadratic_error", "cubic_error", "quartic_error"]);
    for row in &r.moments {
        m.row(&[Cell::F(row.h), Cell::F(row.quadratic), Cell::F(row.cubic), Cell::F(row.quartic)]);
    }
    let labelled: Vec<(String, &SampledCurve)> = r
        .rows
        .iter()
        .zip(&r.reconstructions)
        .map(|(row, c)| (format!("M{}", row.mesh), c))
        .collect();
    let mut artifacts = vec![
        t.finish("reconstruct_convergence.csv", Some("loglog")),
        m.finish("moment_reconstruction.csv", Some("loglog")),
        curve_artifact("reconstructed_curves.csv", &labelled),
    ];
    if let Some(j) = &r.jumps {
        artifacts.push(Artifact {
            name: "jumps.csv".into(),
            columns: vec!["cell_id".into(), "dx".into(), "dy".into()],
            figure: None,
            contents: j.to_csv_string(),
        });
    }
    Ok((serde_json::to_value(&r)?, artifacts))
}

// --------------------------------------------------------------- dispatch

/// Runs a preset in memory.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (summary, artifacts) = match cfg.preset {
        Preset::Reparam => reparam_output(cfg)?,
        Preset::QuadConvergence => quad_output(cfg)?,
        Preset::NoiseRobustness => noise_output(cfg)?,
        Preset::RoughShapes => rough_output(cfg)?,
        Preset::MetricConvergence => metric_output(cfg)?,
        Preset::WigglyTable => wiggly_output(cfg)?,
        Preset::SupercircleNorms => supercircle_norms_output(cfg)?,
        Preset::SupercirclePca => pca_output(supercircle_pca(cfg)?, "supercircle_pca.csv", "scatter")?,
        Preset::RandomShapesMds => mds_output(random_shapes_mds(cfg)?, "random_shapes_mds")?,
        Preset::FishFamily => mds_output(fish_family_mds(cfg)?, "fish_family")?,
        Preset::ThreeClassPca => {
            let r = three_class_pca(cfg)?;
            let (_, artifacts) = pca_output(r.pca.clone(), "three_class_pca.csv", "scatter")?;
            (serde_json::to_value(&r)?, artifacts)
        }
        Preset::LineDistance => line_output(cfg)?,
        Preset::RepresenterField => representer_output(cfg)?,
        Preset::ReconstructConvergence => reconstruct_output(cfg)?,
    };
    Ok(ExperimentOutput {
        config: cfg.clone(),
        summary: round_json(&summary, 6),
        artifacts,
    })
}

/// Column contracts of a run, for downstream consumers.
pub fn manifest(output: &ExperimentOutput) -> Value {
    let files: Vec<Value> = output
        .artifacts
        .iter()
        .map(|a| {
            json!({
                "file": a.name,
                "columns": a.columns,
                "header": !a.columns.is_empty(),
                "figure": a.figure,
            })
        })
        .collect();
    json!({
        "preset": output.config.preset.name(),
        "config": "config.json",
        "summary": "summary.json",
        "artifacts": files,
    })
}

/// Writes artifacts, `config.json`, `summary.json` and `manifest.json` to `dir`.
pub fn write_output(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, contents: &str| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    for a in &output.artifacts {
        put(&a.name, &a.contents)?;
    }
    put("config.json", &(output.config.to_json()? + "\n"))?;
    put("summary.json", &(serde_json::to_string_pretty(&output.summary)? + "\n"))?;
    put("manifest.json", &(serde_json::to_string_pretty(&manifest(output))? + "\n"))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(json, format!("\"{}\"", p.name()));
        }
        let err = "nope".parse::<Preset>().unwrap_err().to_string();
        assert!(err.contains("wiggly-table") && err.contains("nope"));
    }

    #[test]
    fn config_round_trips_through_json() {
        for p in Preset::ALL {
            let c = ExperimentConfig::preset(p);
            assert_eq!(ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn rounding_to_significant_digits() {
        let v = json!({"a": 0.123456789, "b": [12345678.9, 3], "c": "x"});
        let r = round_json(&v, 6);
        assert_eq!(r["a"], json!(0.123457));
        assert_eq!(r["b"][0], json!(12345700.0));
        assert_eq!(r["b"][1], json!(3));
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn ideal_wiggly_scaling() {
        let h1 = [[1.0, 0.7, 0.5]; 6];
        let mut h2 = [[0.0; 3]; 6];
        for (i, row) in h2.iter_mut().enumerate() {
            let w = WIGGLY_OMEGAS[i] as f64;
            for (j, v) in row.iter_mut().enumerate() {
                *v = WIGGLY_EPS[j] / w.sqrt();
            }
        }
        let s = wiggly_scaling(&h1, &h2);
        assert!(s.h2_eps_slopes.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(s.h2_omega_slopes_high.iter().all(|v| (v + 0.5).abs() < 1e-12));
        assert!(s.h1_omega_slopes.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn small_presets_run_and_are_deterministic() {
        let mut cfg = ExperimentConfig::preset(Preset::SupercirclePca);
        cfg.points = 128;
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.artifacts, b.artifacts);
        assert_eq!(a.summary, b.summary);
        let m = manifest(&a);
        assert_eq!(m["artifacts"][0]["columns"], json!(["label", "class", "x", "y"]));
    }
}
