//! Resolution of flags and config file into one [`RunConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use mixpart::diffnum::Scheme;
use mixpart::expr::parse;
use mixpart::funcs::{builtin, from_expr, Function2D, Rectangle};
use mixpart::strongdiff::{default_radii, SamplerConfig};
use mixpart::tolstov::QuadratureSpec;
use mixpart::{Axis, Point};
use serde::{Deserialize, Serialize};

use crate::args::Opts;
use crate::Failure;

/// Config file keys; the same names as the flags, with underscores.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub builtin: Option<String>,
    pub expr: Option<String>,
    pub expr_file: Option<PathBuf>,
    pub density: Option<String>,
    pub rect: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub at: Option<String>,
    pub axis: Option<String>,
    pub eta: Option<f64>,
    pub pairs: Option<usize>,
    pub slices: Option<usize>,
    pub samples: Option<usize>,
    pub panels: Option<u32>,
    pub levels: Option<u32>,
    pub scheme: Option<String>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::usage(format!("--config: cannot read {}: {e}", path.display()))
        })?;
        toml::from_str(&text).map_err(|e| {
            let msg = e.message().to_string();
            Failure::usage(format!("--config: {}: {msg}", path.display()))
        })
    }
}

/// Where the function came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Builtin { name: String },
    Expr { text: String },
    ExprFile { path: PathBuf, text: String },
}

/// Every setting of a run after defaults, file and flags are merged.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub source: Source,
    pub rect: Rectangle,
    pub grid: [usize; 2],
    pub tol: f64,
    pub eta: f64,
    pub radii: Vec<f64>,
    pub seed: u64,
    pub pairs: usize,
    pub at: Point,
    pub axis: Axis,
    pub slices: usize,
    pub samples: usize,
    pub quadrature: QuadratureSpec,
    pub scheme: Scheme,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            seed: self.seed,
            pairs_per_radius: self.pairs,
        }
    }
}

/// Splits `s` on `sep` into exactly `n` numbers.
fn numbers(s: &str, sep: char, n: usize) -> Option<Vec<f64>> {
    let v: Vec<f64> = s
        .split(sep)
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()?;
    (v.len() == n && v.iter().all(|x| x.is_finite())).then_some(v)
}

pub fn parse_rect(s: &str) -> Result<Rectangle, String> {
    let v = numbers(s, ',', 4).ok_or_else(|| format!("expected a,b,c,d, got '{s}'"))?;
    Rectangle::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

pub fn parse_point(s: &str) -> Result<Point, String> {
    let v = numbers(s, ',', 2).ok_or_else(|| format!("expected x,y, got '{s}'"))?;
    Ok(Point::new(v[0], v[1]))
}

pub fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let bad = || format!("expected NXxNY, got '{s}'");
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let nx = a.trim().parse().map_err(|_| bad())?;
    let ny = b.trim().parse().map_err(|_| bad())?;
    Ok([nx, ny])
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    match s {
        "x" | "X" => Ok(Axis::X),
        "y" | "Y" => Ok(Axis::Y),
        _ => Err(format!("expected x or y, got '{s}'")),
    }
}

pub fn parse_scheme(s: &str) -> Result<Scheme, String> {
    Ok(match s {
        "central" => Scheme::Central,
        "forward" => Scheme::Forward,
        "backward" => Scheme::Backward,
        "richardson" => Scheme::Richardson,
        _ => {
            return Err(format!(
                "expected central, forward, backward or richardson, got '{s}'"
            ))
        }
    })
}

/// Flag value if given, else file value, each tagged with its origin for
/// error messages.
fn pick<T>(flag: Option<T>, file: Option<T>, name: &str) -> Option<(T, String)> {
    match (flag, file) {
        (Some(v), _) => Some((v, format!("--{name}"))),
        (None, Some(v)) => Some((v, format!("config key '{}'", name.replace('-', "_")))),
        (None, None) => None,
    }
}

fn parsed<T>(
    flag: Option<String>,
    file: Option<String>,
    name: &str,
    parse: fn(&str) -> Result<T, String>,
) -> Result<Option<T>, Failure> {
    pick(flag, file, name)
        .map(|(s, origin)| parse(&s).map_err(|e| Failure::usage(format!("{origin}: {e}"))))
        .transpose()
}

fn positive(v: f64, origin: &str) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::usage(format!(
            "{origin}: must be positive, got {v}"
        )))
    }
}

/// A requested function source before it is loaded.
enum Requested {
    Builtin(String),
    Expr(String),
    ExprFile(PathBuf),
    /// `--density`: a builtin label if one matches, else an expression.
    Density(String),
}

fn requested(o: &Opts, file: &FileConfig, density: bool) -> Result<Requested, Failure> {
    fn collect(
        builtin: &Option<String>,
        expr: &Option<String>,
        expr_file: &Option<PathBuf>,
        density: Option<&String>,
    ) -> Vec<(&'static str, Requested)> {
        let mut v = Vec::new();
        if let Some(d) = density {
            v.push(("density", Requested::Density(d.clone())));
        }
        if let Some(b) = builtin {
            v.push(("builtin", Requested::Builtin(b.clone())));
        }
        if let Some(e) = expr {
            v.push(("expr", Requested::Expr(e.clone())));
        }
        if let Some(p) = expr_file {
            v.push(("expr-file", Requested::ExprFile(p.clone())));
        }
        v
    }
    let flags = collect(
        &o.builtin,
        &o.expr,
        &o.expr_file,
        o.density.as_ref().filter(|_| density),
    );
    let mut chosen = if flags.is_empty() {
        collect(
            &file.builtin,
            &file.expr,
            &file.expr_file,
            file.density.as_ref().filter(|_| density),
        )
    } else {
        flags
    };
    if o.density.is_some() && !density {
        return Err(Failure::usage("--density: only used by tolstov".into()));
    }
    match chosen.len() {
        0 => Err(Failure::usage(
            "no function given: use one of --builtin, --expr, --expr-file".into(),
        )),
        1 => Ok(chosen.pop().expect("one source").1),
        _ => {
            let names: Vec<String> = chosen.iter().map(|(n, _)| format!("--{n}")).collect();
            Err(Failure::usage(format!(
                "{}: give exactly one function source",
                names.join(", ")
            )))
        }
    }
}

fn load_expr(text: &str, origin: &str) -> Result<mixpart::expr::ExprAst, Failure> {
    parse(text).map_err(|e| Failure::usage(format!("{origin}: {e}")))
}

/// Default rectangle for an expression: `[-1, 1]^2`, widened to `[-s, s]^2`
/// with `s = 2 max(|x|, |y|)` when the requested point lies outside it.
fn expr_rect(at: Option<Point>) -> Rectangle {
    let s = at.map_or(0.0, |p| 2.0 * p.x.abs().max(p.y.abs()));
    Rectangle::square(-s.max(1.0), s.max(1.0))
}

/// Resolves the function, its source record, and the rectangle.
fn function(
    req: Requested,
    rect: Option<Rectangle>,
    at: Option<Point>,
) -> Result<(Function2D, Source, Rectangle), Failure> {
    let from_text = |text: String, origin: &str, source: Source| {
        let ast = load_expr(&text, origin)?;
        let r = rect.unwrap_or_else(|| expr_rect(at));
        Ok((from_expr(ast, r), source, r))
    };
    match req {
        Requested::Builtin(name) => {
            let f = builtin(&name).map_err(|e| Failure::usage(format!("--builtin: {e}")))?;
            let r = rect.unwrap_or(f.domain());
            Ok((f.on(r), Source::Builtin { name }, r))
        }
        Requested::Density(s) => match builtin(&s) {
            Ok(f) => {
                let r = rect.unwrap_or(f.domain());
                Ok((f.on(r), Source::Builtin { name: s }, r))
            }
            Err(_) => from_text(s.clone(), "--density", Source::Expr { text: s }),
        },
        Requested::Expr(text) => from_text(text.clone(), "--expr", Source::Expr { text }),
        Requested::ExprFile(path) => {
            let text = fs::read_to_string(&path).map_err(|e| {
                Failure::usage(format!("--expr-file: cannot read {}: {e}", path.display()))
            })?;
            let text = text.trim().to_string();
            from_text(text.clone(), "--expr-file", Source::ExprFile { path, text })
        }
    }
}

/// Merges defaults, config file and flags; loads the function.
pub fn resolve(command: &str, o: &Opts, verbosity: u8) -> Result<(RunConfig, Function2D), Failure> {
    let file = match &o.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let rect = parsed(o.rect.clone(), file.rect.clone(), "rect", parse_rect)?;
    let at = parsed(o.at.clone(), file.at.clone(), "at", parse_point)?;
    let req = requested(o, &file, command == "tolstov")?;
    let (f, source, rect) = function(req, rect, at)?;
    let at = at.unwrap_or(Point::new((rect.a + rect.b) / 2.0, (rect.c + rect.d) / 2.0));

    let grid = parsed(o.grid.clone(), file.grid.clone(), "grid", parse_grid)?.unwrap_or([51, 51]);
    let axis = parsed(o.axis.clone(), file.axis.clone(), "axis", parse_axis)?.unwrap_or(Axis::X);
    let scheme = parsed(
        o.scheme.clone(),
        file.scheme.clone(),
        "scheme",
        parse_scheme,
    )?
    .unwrap_or(Scheme::Central);
    let tol = match pick(o.tol, file.tol, "tol") {
        Some((v, origin)) => positive(v, &origin)?,
        None => 1e-5,
    };
    let eta = match pick(o.eta, file.eta, "eta") {
        Some((v, origin)) => positive(v, &origin)?,
        None => 1e-3,
    };
    let radii = match pick(o.radii.clone(), file.radii.clone(), "radii") {
        Some((v, origin)) => {
            let ok = !v.is_empty()
                && v.iter().all(|r| r.is_finite() && *r > 0.0)
                && v.windows(2).all(|w| w[1] < w[0]);
            if !ok {
                return Err(Failure::usage(format!(
                    "{origin}: radii must be positive and strictly decreasing"
                )));
            }
            v
        }
        None => default_radii(rect.half_extent()),
    };
    let defaults = SamplerConfig::default();
    let quadrature = QuadratureSpec {
        panels_per_unit: o
            .panels
            .or(file.panels)
            .unwrap_or(QuadratureSpec::default().panels_per_unit),
        refinement_levels: o.levels.or(file.levels).unwrap_or(0),
    };
    if quadrature.validate().is_err() {
        return Err(Failure::usage(
            "--panels/--levels: panels must be even and at least 8, levels at most 20".into(),
        ));
    }
    let cfg = RunConfig {
        command: command.to_string(),
        source,
        rect,
        grid,
        tol,
        eta,
        radii,
        seed: o.seed.or(file.seed).unwrap_or(defaults.seed),
        pairs: o.pairs.or(file.pairs).unwrap_or(defaults.pairs_per_radius),
        at,
        axis,
        slices: o.slices.or(file.slices).unwrap_or(21),
        samples: o.samples.or(file.samples).unwrap_or(128),
        quadrature,
        scheme,
        json: o.json.clone().or(file.json),
        csv: o.csv.clone().or(file.csv),
        verbosity,
    };
    Ok((cfg, f))
}
