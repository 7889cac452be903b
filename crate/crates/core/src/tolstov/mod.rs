//! Functions built as double integrals of a density,
//! `f(x, y) = int_a^x int_c^y h(u, v) dv du`, and checks that their slice
//! derivatives and mixed partials recover the density.
//!
//! The integrals are composite Simpson on panels anchored at the lower
//! bound of each variable, evaluated on demand. Sample points for the checks
//! are midpoints of a uniform partition, `a + (i + 1/2)(b - a)/n`.

mod quad;

use alloc::format;
use alloc::vec::Vec;

use crate::diffnum::{mixed_iterated, partial, DerivativeEstimate, Scheme};
use crate::funcs::{Function2D, Rectangle};
use crate::{math, Axis, EvalError, Point};
use quad::{simpson_from, Tally};

/// Panel density of the nested Simpson rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    /// Panels per unit length at level 0. Even and at least 8.
    pub panels_per_unit: u32,
    /// Each level halves the panel width.
    pub refinement_levels: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            panels_per_unit: 32,
            refinement_levels: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TolstovError {
    #[error("panels_per_unit must be even and at least 8")]
    BadSpec,
    #[error("need at least one sample along each axis")]
    EmptyGrid,
    #[error("too many density evaluations failed")]
    QuadratureFailure,
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), TolstovError> {
        if self.panels_per_unit < 8
            || !self.panels_per_unit.is_multiple_of(2)
            || self.refinement_levels > 20
        {
            return Err(TolstovError::BadSpec);
        }
        Ok(())
    }

    /// Panel width.
    pub fn width(&self) -> f64 {
        1.0 / (f64::from(self.panels_per_unit) * math::exp2(f64::from(self.refinement_levels)))
    }
}

/// `int_{lo}^{t} h` along `axis` with the other coordinate fixed.
fn line_integral(
    h: &Function2D,
    axis: Axis,
    lo: f64,
    t: f64,
    fixed: f64,
    w: f64,
) -> Result<f64, EvalError> {
    let mut tally = Tally::default();
    let base = axis.other().with(Point::default(), fixed);
    let v = simpson_from(
        &mut |s, _: &mut Tally| h.eval_at(axis.with(base, s)),
        lo,
        t,
        w,
        &mut tally,
    );
    tally.check()?;
    Ok(v)
}

/// `int_c^y h(x, v) dv`, with the same panels as [`integrate_density`].
pub fn inner_integral(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
    x: f64,
    y: f64,
) -> Result<f64, EvalError> {
    line_integral(h, Axis::Y, rect.c, y, x, spec.width())
}

/// `int_a^x h(u, y) du`, with the same panels as [`integrate_density`].
pub fn outer_integral(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
    x: f64,
    y: f64,
) -> Result<f64, EvalError> {
    line_integral(h, Axis::X, rect.a, x, y, spec.width())
}

/// `f(x, y) = int_a^x du int_c^y h(u, v) dv` on `rect`.
///
/// Composite Simpson in `v`, then in `u`. An evaluation fails with
/// [`EvalError::QuadratureFailure`] when more than one percent of the density
/// evaluations behind it fail; fewer failures are dropped from the sums.
pub fn integrate_density(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
) -> Result<Function2D, TolstovError> {
    spec.validate()?;
    let w = spec.width();
    let h = h.clone();
    let label = format!("int {}", h.label());
    Ok(Function2D::new(label, rect, move |x, y| {
        let mut tally = Tally::default();
        let v = simpson_from(
            &mut |u, tally: &mut Tally| {
                Ok(simpson_from(
                    &mut |v, _: &mut Tally| h.eval(u, v),
                    rect.c,
                    y,
                    w,
                    tally,
                ))
            },
            rect.a,
            x,
            w,
            &mut tally,
        );
        tally.check()?;
        Ok(v)
    }))
}

/// Classification of one sample point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PointStatus {
    Pass,
    Mismatch,
    /// The finite-difference estimate did not settle within `tol`, as next
    /// to a jump of the density.
    Flagged,
    /// The estimate or its reference value could not be evaluated.
    Excluded,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Pass => "pass",
            PointStatus::Mismatch => "mismatch",
            PointStatus::Flagged => "flagged",
            PointStatus::Excluded => "excluded",
        }
    }
}

/// Counts by status and the pass share among decided points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StatusCounts {
    pub pass: usize,
    pub mismatch: usize,
    pub flagged: usize,
    pub excluded: usize,
    /// `pass / (pass + mismatch)`; one when nothing was decided.
    pub pass_fraction: f64,
    /// Max gap over passing and mismatching points.
    pub max_gap: f64,
}

impl StatusCounts {
    fn add(&mut self, status: PointStatus, gap: f64) {
        match status {
            PointStatus::Pass => self.pass += 1,
            PointStatus::Mismatch => self.mismatch += 1,
            PointStatus::Flagged => self.flagged += 1,
            PointStatus::Excluded => self.excluded += 1,
        }
        if matches!(status, PointStatus::Pass | PointStatus::Mismatch) {
            self.max_gap = self.max_gap.max(gap);
        }
        let decided = self.pass + self.mismatch;
        self.pass_fraction = if decided == 0 {
            1.0
        } else {
            self.pass as f64 / decided as f64
        };
    }
}

fn classify(
    e: &DerivativeEstimate,
    reference: Result<f64, EvalError>,
    tol: f64,
) -> (f64, PointStatus) {
    let Ok(r) = reference else {
        return (f64::NAN, PointStatus::Excluded);
    };
    if e.excluded {
        return (f64::NAN, PointStatus::Excluded);
    }
    let gap = math::abs(e.value - r);
    let settled = e.error_indicator <= tol;
    let status = if !settled {
        PointStatus::Flagged
    } else if gap <= tol {
        PointStatus::Pass
    } else {
        PointStatus::Mismatch
    };
    (gap, status)
}

/// `n` midpoints of a uniform partition of `[lo, hi]`.
pub fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect()
}

fn grids(rect: Rectangle, nx: usize, ny: usize) -> Result<(Vec<f64>, Vec<f64>), TolstovError> {
    if nx == 0 || ny == 0 {
        return Err(TolstovError::EmptyGrid);
    }
    Ok((midpoints(rect.a, rect.b, nx), midpoints(rect.c, rect.d, ny)))
}

/// Builds `f` and touches every panel node once, so a density that fails too
/// often is reported before any derivative is taken.
fn build(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
) -> Result<Function2D, TolstovError> {
    let f = integrate_density(h, rect, spec)?;
    f.eval(rect.b, rect.d)
        .map_err(|_| TolstovError::QuadratureFailure)?;
    Ok(f)
}

/// One sample of [`verify_lemma1`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SliceGap {
    pub x: f64,
    pub y: f64,
    /// Finite-difference `d1 f`.
    pub estimate: f64,
    /// `int_c^y h(x, v) dv`.
    pub reference: f64,
    pub gap: f64,
    pub indicator: f64,
    pub status: PointStatus,
}

/// `d1 f(x, y)` against `int_c^y h(x, v) dv` on a sample grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Lemma1Report {
    pub rect: Rectangle,
    pub spec: QuadratureSpec,
    pub tol: f64,
    pub x_samples: Vec<f64>,
    pub y_samples: Vec<f64>,
    pub max_gap: f64,
    pub pass_fraction: f64,
    pub counts: StatusCounts,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub points: Vec<SliceGap>,
}

/// Checks that the `x`-derivative of the integrated density is the single
/// integral of the density in `y`.
///
/// Points where the derivative estimate is flagged (indicator above `tol`)
/// or excluded are counted but do not enter `pass_fraction` or `max_gap`.
pub fn verify_lemma1(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
    nx: usize,
    ny: usize,
    tol: f64,
) -> Result<Lemma1Report, TolstovError> {
    let f = build(h, rect, spec)?;
    let (xs, ys) = grids(rect, nx, ny)?;
    let mut counts = StatusCounts {
        pass_fraction: 1.0,
        ..StatusCounts::default()
    };
    let mut points = Vec::with_capacity(nx * ny);
    for &x in &xs {
        for &y in &ys {
            let e = partial(&f, Axis::X, Point::new(x, y), Scheme::Central, None);
            let reference = inner_integral(h, rect, spec, x, y);
            if reference == Err(EvalError::QuadratureFailure) {
                return Err(TolstovError::QuadratureFailure);
            }
            let (gap, status) = classify(&e, reference, tol);
            counts.add(status, gap);
            points.push(SliceGap {
                x,
                y,
                estimate: e.value,
                reference: reference.unwrap_or(f64::NAN),
                gap,
                indicator: e.error_indicator,
                status,
            });
        }
    }
    Ok(Lemma1Report {
        rect,
        spec,
        tol,
        x_samples: xs,
        y_samples: ys,
        max_gap: counts.max_gap,
        pass_fraction: counts.pass_fraction,
        counts,
        points,
    })
}

/// All checks at one grid node of [`verify_theorem2`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NodeGaps {
    pub x: f64,
    pub y: f64,
    pub density: f64,
    pub d21: f64,
    pub d12: f64,
    pub gap_a1: f64,
    pub gap_a2: f64,
    pub gap_d21: f64,
    pub gap_d12: f64,
    /// Status of the mixed-partial check.
    pub status: PointStatus,
}

/// Mixed-partial pass share along one fixed `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SliceSummary {
    pub x: f64,
    pub pass: usize,
    pub decided: usize,
    pub pass_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Theorem2Report {
    pub rect: Rectangle,
    pub spec: QuadratureSpec,
    pub tol: f64,
    pub nx: usize,
    pub ny: usize,
    /// `d1 f` against `int_c^y h(x, v) dv`.
    pub a1: StatusCounts,
    /// `d2 f` against `int_a^x h(u, y) du`.
    pub a2: StatusCounts,
    /// Both mixed partials against `h`.
    pub mixed: StatusCounts,
    pub max_gap_a1: f64,
    pub max_gap_a2: f64,
    pub max_gap_d21: f64,
    pub max_gap_d12: f64,
    pub pass_fraction: f64,
    pub slices: Vec<SliceSummary>,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub nodes: Vec<NodeGaps>,
}

/// Compares slice derivatives and both mixed partials of the integrated
/// density with the density on a midpoint grid.
///
/// A node's mixed status is excluded if either order is, flagged if either
/// indicator exceeds `tol`, and passes when both gaps are within `tol`.
pub fn verify_theorem2(
    h: &Function2D,
    rect: Rectangle,
    spec: QuadratureSpec,
    nx: usize,
    ny: usize,
    tol: f64,
) -> Result<Theorem2Report, TolstovError> {
    let f = build(h, rect, spec)?;
    let (xs, ys) = grids(rect, nx, ny)?;
    let fresh = StatusCounts {
        pass_fraction: 1.0,
        ..StatusCounts::default()
    };
    let (mut a1, mut a2, mut mixed) = (fresh, fresh, fresh);
    let (mut max21, mut max12) = (0.0f64, 0.0f64);
    let mut nodes = Vec::with_capacity(nx * ny);
    let mut slices = Vec::with_capacity(nx);
    for &x in &xs {
        let mut slice = SliceSummary {
            x,
            pass: 0,
            decided: 0,
            pass_fraction: 1.0,
        };
        for &y in &ys {
            let p = Point::new(x, y);
            let r1 = inner_integral(h, rect, spec, x, y);
            let r2 = outer_integral(h, rect, spec, x, y);
            if r1 == Err(EvalError::QuadratureFailure) || r2 == Err(EvalError::QuadratureFailure) {
                return Err(TolstovError::QuadratureFailure);
            }
            let (g1, s1) = classify(&partial(&f, Axis::X, p, Scheme::Central, None), r1, tol);
            let (g2, s2) = classify(&partial(&f, Axis::Y, p, Scheme::Central, None), r2, tol);
            a1.add(s1, g1);
            a2.add(s2, g2);

            let density = h.eval(x, y);
            let e21 = mixed_iterated(&f, (Axis::X, Axis::Y), p);
            let e12 = mixed_iterated(&f, (Axis::Y, Axis::X), p);
            let (g21, s21) = classify(&e21, density, tol);
            let (g12, s12) = classify(&e12, density, tol);
            let status = [s21, s12]
                .into_iter()
                .max_by_key(|s| match s {
                    PointStatus::Pass => 0,
                    PointStatus::Mismatch => 1,
                    PointStatus::Flagged => 2,
                    PointStatus::Excluded => 3,
                })
                .unwrap_or(PointStatus::Excluded);
            let gap = if status == PointStatus::Excluded {
                f64::NAN
            } else {
                g21.max(g12)
            };
            mixed.add(status, gap);
            if matches!(status, PointStatus::Pass | PointStatus::Mismatch) {
                max21 = max21.max(g21);
                max12 = max12.max(g12);
                slice.decided += 1;
                slice.pass += usize::from(status == PointStatus::Pass);
            }
            nodes.push(NodeGaps {
                x,
                y,
                density: density.unwrap_or(f64::NAN),
                d21: e21.value,
                d12: e12.value,
                gap_a1: g1,
                gap_a2: g2,
                gap_d21: g21,
                gap_d12: g12,
                status,
            });
        }
        if slice.decided > 0 {
            slice.pass_fraction = slice.pass as f64 / slice.decided as f64;
        }
        slices.push(slice);
    }
    Ok(Theorem2Report {
        rect,
        spec,
        tol,
        nx,
        ny,
        max_gap_a1: a1.max_gap,
        max_gap_a2: a2.max_gap,
        max_gap_d21: max21,
        max_gap_d12: max12,
        pass_fraction: mixed.pass_fraction,
        a1,
        a2,
        mixed,
        slices,
        nodes,
    })
}
