//! Finite-difference estimates of first and mixed second partials, and the
//! grid-level comparison of the two mixed orders.
//!
//! Step policy: a first-derivative stencil at coordinate `c` starts from
//! `max(|c|, 1) * eps^(1/3)`, an iterated mixed stencil's outer difference
//! from `max(|c|, 1) * eps^(1/4)`, both rounded to the nearest power of two
//! so that `c + h` and `c - h` are formed with little or no rounding. The
//! step is then halved until the difference between consecutive levels
//! stops decreasing, or after eight levels.

mod audit;
mod mixed;
mod partial;

use crate::math;

pub use audit::{schwarz_audit, AuditNode, NodeStatus, SchwarzAuditReport};
pub use mixed::{mixed_cross, mixed_iterated};
pub use partial::partial;

/// Maximum number of step levels tried by the refinement loop.
pub const MAX_LEVELS: u32 = 8;

/// Difference scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Scheme {
    /// `(g(c+h) - g(c-h)) / 2h`.
    Central,
    /// Three-point one-sided `(-3g(c) + 4g(c+h) - g(c+2h)) / 2h`.
    Forward,
    /// Mirror image of [`Scheme::Forward`].
    Backward,
    /// One Richardson level over the central quotients at `h` and `h/2`.
    Richardson,
}

/// A derivative value with the step and scheme that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DerivativeEstimate {
    pub value: f64,
    /// Final step used.
    pub step: f64,
    pub scheme: Scheme,
    /// Difference between the last two refinement levels, raised to half the
    /// one-sided slope gap when the stencil straddles a corner.
    pub error_indicator: f64,
    /// Set when neither the requested stencil nor its fallbacks could be
    /// evaluated. `value` is NaN then.
    pub excluded: bool,
}

impl DerivativeEstimate {
    pub(crate) fn excluded(step: f64, scheme: Scheme) -> Self {
        DerivativeEstimate {
            value: f64::NAN,
            step,
            scheme,
            error_indicator: f64::INFINITY,
            excluded: true,
        }
    }

    /// The value, unless excluded.
    pub fn ok(&self) -> Option<f64> {
        (!self.excluded).then_some(self.value)
    }
}

/// Initial first-derivative step at coordinate `c`.
pub fn first_step(c: f64) -> f64 {
    math::pow2_near(math::abs(c).max(1.0) * math::cbrt(f64::EPSILON))
}

/// Initial outer step of an iterated mixed stencil at coordinate `c`.
pub fn mixed_step(c: f64) -> f64 {
    math::pow2_near(math::abs(c).max(1.0) * math::sqrt(math::sqrt(f64::EPSILON)))
}

/// Half-width of the region an iterated mixed stencil centred at `c` may
/// touch along one axis.
pub fn mixed_reach(c: f64) -> f64 {
    2.0 * mixed_step(c)
}

/// One difference quotient of the scalar slice `g` around `c`.
fn quotient<G, E>(g: &mut G, c: f64, h: f64, scheme: Scheme) -> Result<f64, E>
where
    G: FnMut(f64) -> Result<f64, E>,
{
    match scheme {
        Scheme::Central | Scheme::Richardson => {
            let (hi, lo) = (c + h, c - h);
            Ok((g(hi)? - g(lo)?) / (hi - lo))
        }
        Scheme::Forward => {
            let (t1, t2) = (c + h, c + 2.0 * h);
            let (g0, g1, g2) = (g(c)?, g(t1)?, g(t2)?);
            Ok((-3.0 * g0 + 4.0 * g1 - g2) / (t2 - c))
        }
        Scheme::Backward => {
            let (t1, t2) = (c - h, c - 2.0 * h);
            let (g0, g1, g2) = (g(c)?, g(t1)?, g(t2)?);
            Ok((3.0 * g0 - 4.0 * g1 + g2) / (c - t2))
        }
    }
}

/// Outcome of the refinement loop: value, final step, indicator.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Refined {
    pub value: f64,
    pub step: f64,
    pub indicator: f64,
}

/// Halving loop shared by all estimators. The scheme needs its first two
/// levels to succeed; a failure deeper down just ends the refinement.
pub(crate) fn refine<G, E>(g: &mut G, c: f64, h0: f64, scheme: Scheme) -> Option<Refined>
where
    G: FnMut(f64) -> Result<f64, E>,
{
    let central = |g: &mut G, k: u32| quotient(g, c, h0 / f64::from(1u32 << k), Scheme::Central);
    // level k of the scheme, and the step it ends on
    let level = |g: &mut G, k: u32| -> Result<(f64, f64), E> {
        match scheme {
            Scheme::Richardson => {
                let coarse = central(g, k)?;
                let fine = central(g, k + 1)?;
                Ok(((4.0 * fine - coarse) / 3.0, h0 / f64::from(1u32 << (k + 1))))
            }
            _ => {
                let h = h0 / f64::from(1u32 << k);
                Ok((quotient(g, c, h, scheme)?, h))
            }
        }
    };
    let levels = if scheme == Scheme::Richardson {
        MAX_LEVELS - 1
    } else {
        MAX_LEVELS
    };
    let (v0, _) = level(g, 0).ok()?;
    let (mut value, mut step) = level(g, 1).ok()?;
    let mut indicator = math::abs(value - v0);
    for k in 2..levels {
        let Ok((next, h)) = level(g, k) else { break };
        let e = math::abs(next - value);
        if e >= indicator {
            break;
        }
        value = next;
        step = h;
        indicator = e;
    }
    Some(Refined {
        value,
        step,
        indicator,
    })
}
