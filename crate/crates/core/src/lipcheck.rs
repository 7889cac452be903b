//! Lipschitz constants of one-variable slices, and of partial-derivative
//! slices uniformly over the other variable.
//!
//! A sampled max of two-point quotients can only under-estimate the true
//! constant. Sample sets are nested in their size, so the estimate never
//! drops as samples are added; reports carry the estimate at a few prefix
//! sizes to show the trend.

use alloc::vec::Vec;

use crate::diffnum::{partial, Scheme};
use crate::funcs::{Function2D, Rectangle};
use crate::sampling::{linspace, van_der_corput, Stream, DEFAULT_SEED};
use crate::{math, Axis, EvalError, Point};

/// Sample points sit on a lattice of `2^-LATTICE_BITS` of the interval.
const LATTICE_BITS: i32 = 20;
/// Pairs closer than this fraction of the interval are skipped.
pub const MIN_SEPARATION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LipError {
    #[error("need at least 8 samples")]
    TooFewSamples,
    #[error("need at least 3 slices")]
    TooFewSlices,
    #[error("derivative and Lipschitz axes must differ")]
    SameAxis,
    #[error("interval must be finite with lo < hi")]
    BadInterval,
    #[error("{failed} of {attempted} slice evaluations failed")]
    ExcludedSlice { failed: usize, attempted: usize },
    #[error("every slice was excluded")]
    AllSlicesExcluded,
}

/// Sampled Lipschitz constant of a slice.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LipschitzEstimate {
    pub k_hat: f64,
    /// Pair attaining `k_hat`, first in sample order on ties.
    pub witness: (f64, f64),
    pub samples: usize,
    pub failed: usize,
    /// `(prefix size, estimate)` for a quarter, half and all of the samples.
    pub trend: Vec<(usize, f64)>,
}

/// Nested sample abscissae on `[lo, hi]`: both endpoints, then van der
/// Corput and seeded uniform points alternately, all on a dyadic lattice of
/// the interval, duplicates dropped.
pub fn sample_points(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    let len = hi - lo;
    let cells = math::exp2(f64::from(LATTICE_BITS));
    let at = |u: f64| {
        if u >= 1.0 {
            hi
        } else {
            lo + len * (math::round(u * cells) / cells)
        }
    };
    let mut rng = Stream::new(seed, 0);
    let mut out: Vec<f64> = Vec::with_capacity(n);
    let mut i = 1u64;
    let push = |v: f64, out: &mut Vec<f64>| {
        if out.len() < n && !out.contains(&v) {
            out.push(v);
        }
    };
    push(lo, &mut out);
    push(hi, &mut out);
    while out.len() < n {
        push(at(van_der_corput(i)), &mut out);
        push(at(rng.unit()), &mut out);
        i += 1;
    }
    out
}

/// Max two-point quotient of `g` over all pairs from [`sample_points`]
/// separated by at least `len * 1e-6`.
pub fn lipschitz_estimate<G>(
    g: G,
    interval: (f64, f64),
    n_samples: usize,
    seed: u64,
) -> Result<LipschitzEstimate, LipError>
where
    G: Fn(f64) -> Result<f64, EvalError>,
{
    let (lo, hi) = interval;
    if n_samples < 8 {
        return Err(LipError::TooFewSamples);
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(LipError::BadInterval);
    }
    let xs = sample_points(lo, hi, n_samples, seed);
    let vals: Vec<Option<f64>> = xs
        .iter()
        .map(|&t| g(t).ok().filter(|v| v.is_finite()))
        .collect();
    let failed = vals.iter().filter(|v| v.is_none()).count();
    if 2 * failed > xs.len() {
        return Err(LipError::ExcludedSlice {
            failed,
            attempted: xs.len(),
        });
    }

    let min_sep = (hi - lo) * MIN_SEPARATION;
    let checkpoints = [xs.len() / 4, xs.len() / 2, xs.len()];
    let mut trend = Vec::new();
    let mut k_hat = 0.0;
    let mut witness = (lo, hi);
    for j in 0..xs.len() {
        if let Some(vj) = vals[j] {
            for i in 0..j {
                let Some(vi) = vals[i] else { continue };
                let d = math::abs(xs[j] - xs[i]);
                if d < min_sep {
                    continue;
                }
                let q = math::abs(vj - vi) / d;
                if q > k_hat {
                    k_hat = q;
                    witness = (xs[i], xs[j]);
                }
            }
        }
        if checkpoints.contains(&(j + 1)) && trend.last().map(|&(m, _)| m) != Some(j + 1) {
            trend.push((j + 1, k_hat));
        }
    }
    Ok(LipschitzEstimate {
        k_hat,
        witness,
        samples: xs.len(),
        failed,
        trend,
    })
}

/// Sampled uniform Lipschitz constant of a family of derivative slices.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UniformLipschitzReport {
    pub derivative_axis: Axis,
    pub lipschitz_axis: Axis,
    pub k_hat: f64,
    /// Slice coordinate (along the non-Lipschitz axis) attaining `k_hat`.
    pub worst_slice: f64,
    pub witness_pair: (Point, Point),
    pub slices_tested: usize,
    pub excluded_slices: usize,
    pub samples_per_slice: usize,
    /// `(slice coordinate, k_hat)` for every slice not excluded.
    pub per_slice: Vec<(f64, f64)>,
}

/// Estimates `K` with `|d f(p) - d f(q)| <= K |p - q|` along `lipschitz_axis`,
/// uniformly over slices, where `d` is the partial along `derivative_axis`.
///
/// Slices are `n_slices` uniform coordinates across the rectangle plus as
/// many seeded random ones. A slice is excluded when more than half of its
/// derivative evaluations fail.
pub fn uniform_partial_lipschitz(
    f: &Function2D,
    derivative_axis: Axis,
    lipschitz_axis: Axis,
    rect: Rectangle,
    n_slices: usize,
    n_samples: usize,
    seed: u64,
) -> Result<UniformLipschitzReport, LipError> {
    if derivative_axis == lipschitz_axis {
        return Err(LipError::SameAxis);
    }
    if n_slices < 3 {
        return Err(LipError::TooFewSlices);
    }
    let slice_axis = lipschitz_axis.other();
    let (s_lo, s_hi) = rect.span(slice_axis);
    let interval = rect.span(lipschitz_axis);
    let cells = math::exp2(f64::from(LATTICE_BITS));
    let mut rng = Stream::new(seed, 1);
    // on the lattice too, so that products of slice and sample coordinates
    // in low-degree polynomials come out exact
    let snap = |u: f64| s_lo + (s_hi - s_lo) * (math::round(u * cells) / cells);
    let slices: Vec<f64> = linspace(0.0, 1.0, n_slices)
        .map(snap)
        .chain((0..n_slices).map(|_| snap(rng.unit())))
        .collect();

    let mut per_slice = Vec::with_capacity(slices.len());
    let mut best: Option<(f64, f64, (f64, f64))> = None;
    let mut excluded = 0;
    for &s in &slices {
        let base = slice_axis.with(Point::default(), s);
        let g = |t: f64| {
            partial(
                f,
                derivative_axis,
                lipschitz_axis.with(base, t),
                Scheme::Central,
                None,
            )
            .ok()
            .ok_or(EvalError::Undefined)
        };
        match lipschitz_estimate(g, interval, n_samples, seed) {
            Ok(est) => {
                per_slice.push((s, est.k_hat));
                if best.is_none_or(|(k, _, _)| est.k_hat > k) {
                    best = Some((est.k_hat, s, est.witness));
                }
            }
            Err(_) => excluded += 1,
        }
    }
    let (k_hat, worst_slice, (t1, t2)) = best.ok_or(LipError::AllSlicesExcluded)?;
    let base = slice_axis.with(Point::default(), worst_slice);
    Ok(UniformLipschitzReport {
        derivative_axis,
        lipschitz_axis,
        k_hat,
        worst_slice,
        witness_pair: (lipschitz_axis.with(base, t1), lipschitz_axis.with(base, t2)),
        slices_tested: slices.len(),
        excluded_slices: excluded,
        samples_per_slice: n_samples,
        per_slice,
    })
}

/// Default seed for slice and sample selection.
pub const SEED: u64 = DEFAULT_SEED;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::funcs::{builtin, from_expr};

    #[test]
    fn one_dimensional_examples() {
        let k = lipschitz_estimate(|t| Ok(t.abs()), (-1.0, 1.0), 64, SEED)
            .unwrap()
            .k_hat;
        assert!((0.99..=1.0).contains(&k), "{k}");
        let k = lipschitz_estimate(|_| Ok(2.5), (-1.0, 1.0), 64, SEED)
            .unwrap()
            .k_hat;
        assert_eq!(k, 0.0);
        let k = lipschitz_estimate(|t| Ok(t * t), (0.0, 1.0), 64, SEED)
            .unwrap()
            .k_hat;
        assert!((1.9..=2.0).contains(&k), "{k}");
    }

    #[test]
    fn samples_are_nested_and_trend_is_monotone() {
        let a = sample_points(-1.0, 2.0, 40, 9);
        let b = sample_points(-1.0, 2.0, 80, 9);
        assert_eq!(a[..], b[..40]);
        let e = lipschitz_estimate(|t| Ok(libm::sin(3.0 * t)), (-1.0, 2.0), 80, 9).unwrap();
        assert!(e.trend.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(e.trend.last().unwrap(), &(80, e.k_hat));
    }

    #[test]
    fn failing_slice_is_excluded() {
        let r = lipschitz_estimate(
            |t| {
                if t < 0.6 {
                    Err(EvalError::Undefined)
                } else {
                    Ok(t)
                }
            },
            (0.0, 1.0),
            32,
            SEED,
        );
        assert!(matches!(r, Err(LipError::ExcludedSlice { .. })));
    }

    #[test]
    fn uniform_examples() {
        let f = builtin("abs_mix").unwrap();
        let r = uniform_partial_lipschitz(&f, Axis::X, Axis::Y, f.domain(), 11, 64, SEED).unwrap();
        assert!((0.99..=1.0).contains(&r.k_hat), "{r:?}");
        assert!(r.per_slice.iter().all(|&(_, k)| k <= 1.0 + 1e-9));
        let f = builtin("xy").unwrap();
        let r = uniform_partial_lipschitz(&f, Axis::X, Axis::Y, f.domain(), 11, 64, SEED).unwrap();
        assert!((0.99..=1.0).contains(&r.k_hat), "{r:?}");
        let f = builtin("smooth_poly").unwrap();
        let r = uniform_partial_lipschitz(&f, Axis::X, Axis::Y, f.domain(), 11, 64, SEED).unwrap();
        assert!((4.9..=5.0).contains(&r.k_hat), "{r:?}");
        assert_eq!(r.worst_slice.abs(), 1.0);
    }

    #[test]
    fn all_excluded_is_an_error() {
        let f = from_expr(
            parse("log(-1 - x*x)").unwrap(),
            Rectangle::square(-1.0, 1.0),
        );
        let r = uniform_partial_lipschitz(&f, Axis::X, Axis::Y, f.domain(), 3, 8, SEED);
        assert_eq!(r, Err(LipError::AllSlicesExcluded));
        let r = uniform_partial_lipschitz(&f, Axis::X, Axis::X, f.domain(), 3, 8, SEED);
        assert_eq!(r, Err(LipError::SameAxis));
    }
}
