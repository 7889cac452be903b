use super::{mixed_step, partial, refine, DerivativeEstimate, Scheme};
use crate::funcs::Function2D;
use crate::{math, Axis, Point};

/// Iterated mixed partial: differentiate along `order.0` first, then along
/// `order.1`.
///
/// `(Axis::X, Axis::Y)` estimates `d21 f = d/dy (d/dx f)`. The outer
/// difference is a central quotient (one-sided as a fallback) of inner
/// [`partial`] estimates, each with its own step refinement. Any excluded
/// inner estimate on a required level excludes the whole estimate.
pub fn mixed_iterated(f: &Function2D, order: (Axis, Axis), p: Point) -> DerivativeEstimate {
    let (first, second) = order;
    let c = second.pick(p);
    let k0 = mixed_step(c);
    let mut inner = |t: f64| {
        partial(f, first, second.with(p, t), Scheme::Central, None)
            .ok()
            .ok_or(())
    };
    [Scheme::Central, Scheme::Forward, Scheme::Backward]
        .into_iter()
        .find_map(|s| {
            refine(&mut inner, c, k0, s).map(|r| DerivativeEstimate {
                value: r.value,
                step: r.step,
                scheme: s,
                error_indicator: r.indicator,
                excluded: false,
            })
        })
        .unwrap_or_else(|| DerivativeEstimate::excluded(k0, Scheme::Central))
}

/// Symmetric double-difference quotient
/// `[f(x+h,y+k) - f(x+h,y-k) - f(x-h,y+k) + f(x-h,y-k)] / 4hk`.
///
/// The value is taken at `(h, k)`; the error indicator compares it with the
/// quotient at `(h/2, k/2)`. The arithmetic is arranged so that swapping the
/// roles of the axes (transposing `f`, `p` and the steps) gives a
/// bit-identical result.
pub fn mixed_cross(f: &Function2D, p: Point, h: f64, k: f64) -> DerivativeEstimate {
    let Some(value) = cross(f, p, h, k) else {
        return DerivativeEstimate::excluded(h.max(k), Scheme::Central);
    };
    let indicator = cross(f, p, h / 2.0, k / 2.0)
        .map(|half| math::abs(value - half))
        .unwrap_or(f64::INFINITY);
    DerivativeEstimate {
        value,
        step: h.max(k),
        scheme: Scheme::Central,
        error_indicator: indicator,
        excluded: false,
    }
}

fn cross(f: &Function2D, p: Point, h: f64, k: f64) -> Option<f64> {
    let (x1, x2) = (p.x - h, p.x + h);
    let (y1, y2) = (p.y - k, p.y + k);
    let pp = f.eval(x2, y2).ok()?;
    let pm = f.eval(x2, y1).ok()?;
    let mp = f.eval(x1, y2).ok()?;
    let mm = f.eval(x1, y1).ok()?;
    let dx = x2 - x1;
    let dy = y2 - y1;
    Some(((pp + mm) - (pm + mp)) / (dx * dy))
}
