//! Strong (Peano) differentiability, measured.
//!
//! A family `g(x, z)` is strongly differentiable in `x` at `(x0, z0)` with
//! derivative `L` when the two-point quotient
//! `(g(x2, z) - g(x1, z)) / (x2 - x1)` tends to `L` as `x1, x2, z` all tend
//! to the base point. The modulus `M(delta)` is the sup of
//! `|quotient - L|` over pairs within radius `delta`; here it is a max over
//! a finite sample.
//!
//! Samples at one radius come from a fixed grid plus a seeded random set
//! whose stream is keyed by the radius itself. The curve reports at each
//! radius the max over its own samples and those of every smaller radius, so
//! sample sets are nested and the sampled `M` can only grow with `delta`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::Cell;

use crate::diffnum::{partial, Scheme};
use crate::funcs::Function2D;
use crate::sampling::{linspace, Stream, DEFAULT_SEED};
use crate::{math, Axis, EvalError, Point};

/// Pair points never come closer than this fraction of the radius.
pub const SEPARATION: f64 = 1e-3;
/// Deterministic grid nodes per radius.
const GRID_NODES: usize = 9;
/// Grid and random points stay this much inside the open ball.
const SHRINK: f64 = 1.0 - 1e-6;
/// `No` needs the modulus to stay above this multiple of `eta`.
pub const NO_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum StrongDiffError {
    #[error("{failed} of {attempted} sample pairs failed at radius {radius:e}")]
    InsufficientSamples {
        radius: f64,
        failed: usize,
        attempted: usize,
    },
    #[error("no point near the base point has a converged inner derivative")]
    EmptyExistenceSet,
    #[error("radii must be positive, finite and strictly decreasing")]
    BadRadii,
    #[error("need at least 16 random pairs per radius")]
    TooFewPairs,
}

impl StrongDiffError {
    /// True for failures caused by the function rather than the request.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            StrongDiffError::InsufficientSamples { .. } | StrongDiffError::EmptyExistenceSet
        )
    }
}

/// Sampler parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplerConfig {
    pub seed: u64,
    /// Random pairs per radius, on top of the fixed grid.
    pub pairs_per_radius: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: DEFAULT_SEED,
            pairs_per_radius: 256,
        }
    }
}

/// `{1e-1, 3e-2, 1e-2, 3e-3, 1e-3}` times `scale`.
pub fn default_radii(scale: f64) -> Vec<f64> {
    [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]
        .iter()
        .map(|r| r * scale)
        .collect()
}

/// One sampled triple: the quotient is taken between `x1` and `x2` at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePair {
    pub x1: f64,
    pub x2: f64,
    pub z: f64,
}

/// The sample triples for radius `delta` around `(x0, z0)`.
///
/// Coordinates are offsets from the base point in whole multiples of a power
/// of two well below the separation floor. Differences of sample points are
/// then exact, so a linear `g` has exactly its slope as every quotient when
/// the base point itself carries few significant bits.
pub fn sample_pairs(x0: f64, z0: f64, delta: f64, cfg: &SamplerConfig) -> Vec<SamplePair> {
    let r = delta * SHRINK;
    let sep = delta * SEPARATION;
    let unit = math::exp2(math::floor(math::log2(sep)) - 12.0);
    let snap = |base: f64, off: f64| base + math::round(off / unit) * unit;
    let ceil_units = |s: f64| math::ceil(s / unit) * unit;
    let nodes: Vec<f64> = linspace(-1.0, 1.0, GRID_NODES)
        .map(|t| snap(x0, r * t))
        .collect();
    let zs = [z0, snap(z0, -r), snap(z0, r)];
    let close = ceil_units(sep);
    let mut out = Vec::with_capacity(GRID_NODES * GRID_NODES * 2 + cfg.pairs_per_radius);
    for &z in &zs {
        for (i, &x1) in nodes.iter().enumerate() {
            for &x2 in &nodes[i + 1..] {
                out.push(SamplePair { x1, x2, z });
            }
            // a close pair pointing inward, so the quotient at each node
            // approaches the local slope
            let x2 = if x1 > x0 { x1 - close } else { x1 + close };
            out.push(SamplePair { x1, x2, z });
        }
    }
    let mut rng = Stream::new(cfg.seed, delta.to_bits());
    let log_span = math::ln(r / sep);
    for _ in 0..cfg.pairs_per_radius {
        let x1 = snap(x0, r * rng.symmetric());
        let z = snap(z0, r * rng.symmetric());
        let s = ceil_units(sep * math::exp(log_span * rng.unit()));
        let up = rng.coin();
        let mut x2 = if up { x1 + s } else { x1 - s };
        if math::abs(x2 - x0) > r {
            x2 = if up { x1 - s } else { x1 + s };
        }
        out.push(SamplePair { x1, x2, z });
    }
    out
}

/// Two-point quotients at radius `delta`. Pairs whose evaluation fails are
/// skipped; more than half failing is an error.
pub fn quotients<G>(
    g: &G,
    at: (f64, f64),
    delta: f64,
    cfg: &SamplerConfig,
) -> Result<Vec<f64>, StrongDiffError>
where
    G: Fn(f64, f64) -> Result<f64, EvalError> + ?Sized,
{
    let pairs = sample_pairs(at.0, at.1, delta, cfg);
    let mut qs = Vec::with_capacity(pairs.len());
    for p in &pairs {
        let q = g(p.x2, p.z)
            .and_then(|b| g(p.x1, p.z).map(|a| (b - a) / (p.x2 - p.x1)))
            .ok()
            .filter(|q| q.is_finite());
        qs.extend(q);
    }
    let failed = pairs.len() - qs.len();
    if 2 * failed > pairs.len() {
        return Err(StrongDiffError::InsufficientSamples {
            radius: delta,
            failed,
            attempted: pairs.len(),
        });
    }
    Ok(qs)
}

/// `max |q - l|` over `qs`.
pub fn deviation(qs: &[f64], l: f64) -> f64 {
    qs.iter().fold(0.0, |m: f64, q| m.max(math::abs(q - l)))
}

/// Slope minimising the sup-deviation of `qs`, with that deviation.
pub fn chebyshev_center(qs: &[f64]) -> (f64, f64) {
    if qs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let lo = qs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l = lo + (hi - lo) / 2.0;
    (l, deviation(qs, l))
}

/// Sampled strong modulus as a function of radius.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModulusCurve {
    /// Base value of the differentiated variable.
    pub x0: f64,
    /// Base value of the parameter.
    pub z0: f64,
    /// Axis of the plane the differentiated variable stands for.
    pub axis: Axis,
    pub candidate_l: f64,
    /// Strictly decreasing.
    pub radii: Vec<f64>,
    pub modulus: Vec<f64>,
    /// Pairs behind `modulus[i]`: those of radius `i` and every smaller one.
    pub pair_count: Vec<usize>,
    pub failed_count: Vec<usize>,
    /// Smallest separation any pair may have, up to coordinate rounding.
    pub min_separation: f64,
}

impl ModulusCurve {
    /// Modulus at the smallest radius.
    pub fn last(&self) -> f64 {
        self.modulus.last().copied().unwrap_or(f64::NAN)
    }

    /// CSV body with columns `delta,modulus,pairs`.
    pub fn csv_rows(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        self.radii
            .iter()
            .zip(&self.modulus)
            .zip(&self.pair_count)
            .map(|((&d, &m), &n)| (d, m, n))
    }
}

fn check_radii(radii: &[f64], cfg: &SamplerConfig) -> Result<(), StrongDiffError> {
    if cfg.pairs_per_radius < 16 {
        return Err(StrongDiffError::TooFewPairs);
    }
    let positive = radii.iter().all(|r| r.is_finite() && *r > 0.0);
    if radii.is_empty() || !positive || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(StrongDiffError::BadRadii);
    }
    Ok(())
}

/// Strong modulus of `g` in its first argument at `at = (x0, z0)` against
/// slope `l`.
pub fn strong_modulus<G>(
    g: &G,
    at: (f64, f64),
    l: f64,
    radii: &[f64],
    cfg: &SamplerConfig,
) -> Result<ModulusCurve, StrongDiffError>
where
    G: Fn(f64, f64) -> Result<f64, EvalError> + ?Sized,
{
    check_radii(radii, cfg)?;
    let mut own = Vec::with_capacity(radii.len());
    for &delta in radii {
        let attempted = sample_pairs(at.0, at.1, delta, cfg).len();
        let qs = quotients(g, at, delta, cfg)?;
        own.push((deviation(&qs, l), qs.len(), attempted - qs.len()));
    }
    let n = radii.len();
    let mut modulus = alloc::vec![0.0; n];
    let mut pair_count = alloc::vec![0; n];
    let mut failed_count = alloc::vec![0; n];
    let (mut m, mut c, mut f) = (0.0f64, 0, 0);
    for i in (0..n).rev() {
        m = m.max(own[i].0);
        c += own[i].1;
        f += own[i].2;
        modulus[i] = m;
        pair_count[i] = c;
        failed_count[i] = f;
    }
    Ok(ModulusCurve {
        x0: at.0,
        z0: at.1,
        axis: Axis::X,
        candidate_l: l,
        radii: radii.to_vec(),
        modulus,
        pair_count,
        failed_count,
        min_separation: radii[n - 1] * SEPARATION,
    })
}

/// Chebyshev centre `L` of the quotients at radius `delta`, and the sampled
/// modulus at that `L`.
pub fn estimate_strong_derivative<G>(
    g: &G,
    at: (f64, f64),
    delta: f64,
    cfg: &SamplerConfig,
) -> Result<(f64, f64), StrongDiffError>
where
    G: Fn(f64, f64) -> Result<f64, EvalError> + ?Sized,
{
    check_radii(&[delta], cfg)?;
    let qs = quotients(g, at, delta, cfg)?;
    Ok(chebyshev_center(&qs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Outcome {
    Yes,
    No,
    Inconclusive,
}

/// Decision of [`is_strongly_differentiable`] with the curve it rests on.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Verdict {
    pub outcome: Outcome,
    /// Absent only when sampling itself failed.
    pub evidence: Option<ModulusCurve>,
    pub eta: f64,
    pub no_factor: f64,
    pub reason: String,
}

/// Heuristic decision on strong differentiability in the first argument.
///
/// `L` is the Chebyshev centre at the smallest radius. The answer is `Yes`
/// when the modulus there is at most `eta` and the curve does not grow as
/// the radius shrinks, `No` when the modulus is at least `10 * eta` at every
/// radius, and `Inconclusive` otherwise. The schedule must have at least four
/// radii spanning two decades; a shorter one, or failed sampling, gives
/// `Inconclusive` with the reason stated.
pub fn is_strongly_differentiable<G>(
    g: &G,
    at: (f64, f64),
    radii: &[f64],
    eta: f64,
    cfg: &SamplerConfig,
) -> Verdict
where
    G: Fn(f64, f64) -> Result<f64, EvalError> + ?Sized,
{
    let verdict = |outcome, evidence, reason: String| Verdict {
        outcome,
        evidence,
        eta,
        no_factor: NO_FACTOR,
        reason,
    };
    if let Err(e) = check_radii(radii, cfg) {
        return verdict(Outcome::Inconclusive, None, e.to_string());
    }
    let (first, last) = (radii[0], radii[radii.len() - 1]);
    if radii.len() < 4 || first / last < 100.0 {
        return verdict(
            Outcome::Inconclusive,
            None,
            "radius schedule needs at least 4 radii spanning 2 decades".into(),
        );
    }
    let curve = estimate_strong_derivative(g, at, last, cfg)
        .and_then(|(l, _)| strong_modulus(g, at, l, radii, cfg));
    let curve = match curve {
        Ok(c) => c,
        Err(e) => return verdict(Outcome::Inconclusive, None, e.to_string()),
    };
    let m_min = curve.last();
    let monotone = curve
        .modulus
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
    let (outcome, reason) = if m_min <= eta && monotone {
        (
            Outcome::Yes,
            format!("modulus {m_min:e} <= {eta:e} at the smallest radius"),
        )
    } else if curve.modulus.iter().all(|&m| m >= NO_FACTOR * eta) {
        let floor = curve.modulus.iter().copied().fold(f64::INFINITY, f64::min);
        (
            Outcome::No,
            format!("modulus stays >= {floor:e} at every radius"),
        )
    } else {
        (
            Outcome::Inconclusive,
            format!("modulus {m_min:e} at the smallest radius is between the thresholds"),
        )
    };
    verdict(outcome, Some(curve), reason)
}

/// Strong derivative estimate: Chebyshev centre and modulus at the smallest
/// radius.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StrongEstimate {
    pub l: f64,
    pub modulus: f64,
}

/// Numerical check that strong partial differentiability gives equal mixed
/// partials at a point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Theorem1Report {
    pub point: Point,
    pub tol: f64,
    /// Strong derivative in `y` of `d1 f`.
    pub strong_d21: StrongEstimate,
    /// Strong derivative in `x` of `d2 f`, restricted to where `d2 f` exists.
    pub strong_d12: StrongEstimate,
    /// Share of sampled points where the `d2 f` estimate converged.
    pub existence_fraction_of_a: f64,
    pub a_points: usize,
    pub a_attempts: usize,
    pub equality_gap: f64,
    pub curve_d21: ModulusCurve,
    pub curve_d12: ModulusCurve,
}

/// Estimates both strong mixed derivatives of `f` at `p`.
///
/// `d1 f` is a finite-difference partial; its strong derivative in `y` gives
/// `d21 f`. `d2 f` is kept only at points where its refinement converged
/// (consecutive levels within `10 * tol`, no corner detected), the stand-in
/// for the set where it exists; the strong derivative in `x` of that
/// restriction gives `d12 f`.
pub fn verify_theorem1(
    f: &Function2D,
    p: Point,
    radii: &[f64],
    tol: f64,
    cfg: &SamplerConfig,
) -> Result<Theorem1Report, StrongDiffError> {
    check_radii(radii, cfg)?;
    let last = radii[radii.len() - 1];

    // g1(y; x) = d1 f(x, y), differentiated in y
    let g1 = |y: f64, x: f64| {
        partial(f, Axis::X, Point::new(x, y), Scheme::Central, None)
            .ok()
            .ok_or(EvalError::Undefined)
    };
    let at1 = (p.y, p.x);
    let (l21, m21) = estimate_strong_derivative(&g1, at1, last, cfg)?;
    let mut curve_d21 = strong_modulus(&g1, at1, l21, radii, cfg)?;
    curve_d21.axis = Axis::Y;

    let (hits, tries) = (Cell::new(0usize), Cell::new(0usize));
    let g2 = |x: f64, y: f64| {
        tries.set(tries.get() + 1);
        let e = partial(f, Axis::Y, Point::new(x, y), Scheme::Central, None);
        let settled = e.error_indicator <= 10.0 * tol;
        if e.excluded || !settled {
            return Err(EvalError::Undefined);
        }
        hits.set(hits.get() + 1);
        Ok(e.value)
    };
    let at2 = (p.x, p.y);
    let strong12 = estimate_strong_derivative(&g2, at2, last, cfg)
        .and_then(|(l, m)| Ok((l, m, strong_modulus(&g2, at2, l, radii, cfg)?)));
    if hits.get() == 0 {
        return Err(StrongDiffError::EmptyExistenceSet);
    }
    let (l12, m12, curve_d12) = strong12?;

    Ok(Theorem1Report {
        point: p,
        tol,
        strong_d21: StrongEstimate {
            l: l21,
            modulus: m21,
        },
        strong_d12: StrongEstimate {
            l: l12,
            modulus: m12,
        },
        existence_fraction_of_a: hits.get() as f64 / tries.get() as f64,
        a_points: hits.get(),
        a_attempts: tries.get(),
        equality_gap: math::abs(l21 - l12),
        curve_d21,
        curve_d12,
    })
}

/// `g(t, z) = f` with `axis` set to `t` and the other coordinate to `z`.
pub fn family(f: &Function2D, axis: Axis) -> impl Fn(f64, f64) -> Result<f64, EvalError> + '_ {
    move |t, z| {
        let p = axis.other().with(Point::default(), z);
        f.eval_at(axis.with(p, t))
    }
}

/// `(axis coordinate, other coordinate)` of `p`.
pub fn family_point(p: Point, axis: Axis) -> (f64, f64) {
    (axis.pick(p), axis.other().pick(p))
}
