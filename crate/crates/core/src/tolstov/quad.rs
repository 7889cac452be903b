use crate::math;
use crate::EvalError;

/// Evaluation counts of one quadrature, failed nodes included.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Tally {
    pub total: usize,
    pub failed: usize,
}

impl Tally {
    /// Failed nodes above one percent of all nodes is a failure of the whole
    /// quadrature.
    pub fn check(&self) -> Result<(), EvalError> {
        if self.failed * 100 > self.total {
            Err(EvalError::QuadratureFailure)
        } else {
            Ok(())
        }
    }
}

/// `int_lo^x g` by Simpson's rule on the panels `[lo + k w, lo + (k+1) w]`
/// lying below `x`, plus one Simpson panel over the remainder up to `x`.
///
/// Anchoring the panels at `lo` rather than spreading a fixed count over
/// `[lo, x]` keeps the result a smooth function of `x` between panel
/// nodes and continuous across them, so it can be differentiated
/// numerically. Failed nodes contribute zero and are counted in `tally`.
pub(crate) fn simpson_from<G>(g: &mut G, lo: f64, x: f64, w: f64, tally: &mut Tally) -> f64
where
    G: FnMut(f64, &mut Tally) -> Result<f64, EvalError>,
{
    if x <= lo {
        return 0.0;
    }
    let mut eval = |t: f64, tally: &mut Tally| {
        tally.total += 1;
        match g(t, tally) {
            Ok(v) if v.is_finite() => v,
            _ => {
                tally.failed += 1;
                0.0
            }
        }
    };
    let node = |k: f64| lo + k * w;
    let mut k = math::floor((x - lo) / w);
    while node(k + 1.0) <= x {
        k += 1.0;
    }
    while k > 0.0 && node(k) > x {
        k -= 1.0;
    }
    let full = k as usize;

    let mut left = eval(lo, tally);
    let mut sum = 0.0;
    for i in 0..full {
        let a = node(i as f64);
        let b = node(i as f64 + 1.0);
        let mid = eval(a + w / 2.0, tally);
        let right = eval(b, tally);
        sum += (b - a) / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
    let a = node(k);
    let t = x - a;
    if t > 0.0 {
        let mid = eval(a + t / 2.0, tally);
        let right = eval(x, tally);
        sum += t / 6.0 * (left + 4.0 * mid + right);
    }
    sum
}
