use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shape_currents::currents::{evaluate_current, CurrentVector, QuadratureRule};
use shape_currents::curve::{self, FourierCoeffs, SampledCurve};
use shape_currents::experiments::{self, ExperimentConfig, Preset};
use shape_currents::metric;
use shape_currents::{build_space, Error, GramOperator, Rect, SpaceDescriptor, DEFAULT_SIGMA};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "shape-currents", version, about = "Shapes as currents: dual Sobolev distances, reconstruction and embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the current of a curve file and print it as JSON.
    Current {
        /// Curve CSV with header `t,x,y`.
        curve: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = Rule::Midpoint)]
        rule: Rule,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the dual norm distance between two curves (CSV) or currents (JSON).
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Rule::Midpoint)]
        rule: Rule,
    },
    /// Run a named experiment preset and write its artifacts.
    Experiment(ExperimentArgs),
    /// Write a generated curve as CSV.
    Generate {
        #[arg(value_enum)]
        shape: Shape,
        #[arg(long, default_value_t = 512)]
        points: usize,
        /// Wiggle amplitude.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Wiggle frequency.
        #[arg(long, default_value_t = 2)]
        omega: u32,
        /// Supercircle exponent.
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        /// Circle radius.
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct SpaceArgs {
    /// Lagrange elements on an M x M grid.
    #[arg(long, conflicts_with = "monomial")]
    mesh: Option<usize>,
    /// Lagrange element degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Global monomials of total degree below N.
    #[arg(long)]
    monomial: Option<usize>,
    /// Domain as `x0,x1,y0,y1`.
    #[arg(long, value_parser = parse_domain)]
    domain: Option<Rect>,
}

impl SpaceArgs {
    /// Applies the flags on top of `base`.
    fn apply(&self, base: SpaceDescriptor) -> SpaceDescriptor {
        let domain = self.domain.unwrap_or_else(|| base.domain());
        let desc = if let Some(n) = self.monomial {
            SpaceDescriptor::monomial(n)
        } else {
            match base {
                SpaceDescriptor::Lagrange { m, degree, .. } => {
                    SpaceDescriptor::lagrange(self.mesh.unwrap_or(m), self.degree.unwrap_or(degree))
                }
                SpaceDescriptor::Monomial { n, .. } => match self.mesh {
                    Some(m) => SpaceDescriptor::lagrange(m, self.degree.unwrap_or(1)),
                    None => SpaceDescriptor::monomial(n),
                },
            }
        };
        desc.with_domain(domain)
    }
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Preset name; optional when --config is given.
    preset: Option<String>,
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, value_enum)]
    rule: Option<Rule>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `out/<preset>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config JSON of an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Rule {
    Midpoint,
    Simpson,
}

impl From<Rule> for QuadratureRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Midpoint => QuadratureRule::Midpoint,
            Rule::Simpson => QuadratureRule::Simpson,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Shape {
    Circle,
    Wiggly,
    Supercircle,
    Bowtie,
    Random,
}

fn parse_domain(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, x1, y0, y1] if x0 < x1 && y0 < y1 => Ok(Rect::new(x0, x1, y0, y1)),
        _ => Err("expected x0,x1,y0,y1 with x0 < x1 and y0 < y1".into()),
    }
}

fn default_space() -> SpaceDescriptor {
    SpaceDescriptor::lagrange(10, 1)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::Json(_) => EXIT_IO,
        Error::Configuration(_) | Error::InvalidSpace(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn load_current(path: &Path, desc: &SpaceDescriptor, rule: QuadratureRule) -> Result<CurrentVector, Error> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return CurrentVector::from_json(&text);
    }
    let c = SampledCurve::read_csv(path)?;
    evaluate_current(&c, &build_space(desc)?, rule)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Current { curve, space, rule, out } => {
            let desc = space.apply(default_space());
            let c = SampledCurve::read_csv(&curve)?;
            let f = evaluate_current(&c, &build_space(&desc)?, rule.into())?;
            match out {
                Some(path) => f.write_json(path)?,
                None => println!("{}", f.to_json()?),
            }
        }
        Command::Distance { a, b, space, sigma, s, rule } => {
            let desc = space.apply(default_space());
            let fa = load_current(&a, &desc, rule.into())?;
            let fb = load_current(&b, &desc, rule.into())?;
            fa.check_compatible(&fb)?;
            let g = GramOperator::assemble(build_space(fa.space())?, sigma)?;
            let d = metric::distance(&fa, &fb, &g, s)?;
            println!("{}", experiments::format_f64(d));
        }
        Command::Experiment(args) => {
            let mut cfg = match (&args.config, &args.preset) {
                (Some(path), _) => ExperimentConfig::read(path)?,
                (None, Some(name)) => ExperimentConfig::preset(name.parse::<Preset>()?),
                (None, None) => {
                    return Err(Error::Configuration(format!(
                        "give a preset or --config; presets: {}",
                        Preset::names().join(", ")
                    )))
                }
            };
            if let (Some(name), Some(_)) = (&args.preset, &args.config) {
                let p = name.parse::<Preset>()?;
                if p != cfg.preset {
                    return Err(Error::Configuration(format!(
                        "preset '{p}' does not match the config's preset '{}'",
                        cfg.preset
                    )));
                }
            }
            cfg.space = args.space.apply(cfg.space.clone());
            if let Some(v) = args.sigma {
                cfg.sigma = v;
            }
            if let Some(v) = args.s {
                cfg.s = v;
            }
            if let Some(v) = args.rule {
                cfg.rule = v.into();
            }
            if let Some(v) = args.points {
                cfg.points = v;
            }
            if let Some(v) = args.seed {
                cfg.seed = v;
            }
            if let Some(v) = args.out {
                cfg.out = Some(v);
            }
            let dir = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("out").join(cfg.preset.name()));
            let output = experiments::run(&cfg)?;
            experiments::write_output(&output, &dir)?;
            println!("{}", serde_json::to_string_pretty(&output.summary)?);
        }
        Command::Generate {
            shape,
            points,
            eps,
            omega,
            r,
            radius,
            seed,
            out,
        } => {
            let c = match shape {
                Shape::Circle => curve::circle(radius, points)?,
                Shape::Wiggly => curve::wiggly_circle(eps, omega, points)?,
                Shape::Supercircle => curve::supercircle(r, points)?,
                Shape::Bowtie => curve::bowtie(points)?,
                Shape::Random => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    curve::fourier_shape(&FourierCoeffs::random_smooth(&mut rng), points)?
                }
            };
            c.write_csv(out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
