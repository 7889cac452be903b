//! A concrete function that is strongly differentiable at 0 but fails to be
//! differentiable at points accumulating at 0.
//!
//! `q(t) = t * s(t)` where, for `t > 0`, `s = +1` on `[1/(2k+1), 1/(2k))`
//! (`k >= 1`) and `s = -1` on `[1/(2k+2), 1/(2k+1))` (`k >= 0`, the last piece
//! extended to `t >= 1`). `s` is odd and `s(0) = 0`, so `q` is even and
//! `h(y) = int_0^y q(t) dt` is odd. Since `|q(t)| <= |t|`, `h` is strongly
//! differentiable at 0 with `h'(0) = 0`, while `h` has a corner at every
//! `1/n`, `n >= 2`.
//!
//! Writing `P_m = [1/(m+1), 1/m)`, the sign on `P_m` is `(-1)^m`, and for
//! `y` in `P_m`
//!
//! ```text
//! h(y) = (-1)^m (y^2 - 1/(m+1)^2) / 2 + T(m)
//! T(m) = (-1)^(m+1) / (2 (m+1)^2) + sum_{j >= m+2} (-1)^j / j^2
//! ```

use crate::math;

fn parity_sign(m: f64) -> f64 {
    if math::floor(m / 2.0) * 2.0 == m {
        1.0
    } else {
        -1.0
    }
}

/// Index `m >= 1` of the piece `[1/(m+1), 1/m)` holding `t > 0`.
fn piece(t: f64) -> f64 {
    if t >= 0.5 {
        return 1.0;
    }
    let m = math::ceil(1.0 / t) - 1.0;
    m.max(1.0)
}

/// `sum_{j >= n} (-1)^j / j^2` for `n >= 1`.
///
/// Sums directly up to 128 terms past `n` and closes with the alternating
/// (Boole) expansion `1/(2N^2) + 1/(2N^3) - 1/(2N^5) + 3/(2N^7) - 17/(2N^9)`.
pub(crate) fn alternating_tail(n: f64) -> f64 {
    const SWITCH: f64 = 128.0;
    let mut sum = 0.0;
    let mut j = n;
    while j < SWITCH {
        sum += parity_sign(j) / (j * j);
        j += 1.0;
    }
    let inv = 1.0 / j;
    let inv2 = inv * inv;
    let series = inv2 * (0.5 + inv * (0.5 + inv2 * (-0.5 + inv2 * (1.5 - 8.5 * inv2))));
    sum + parity_sign(j) * series
}

/// Sign function `s`.
pub fn s(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if t > 0.0 {
        parity_sign(piece(t))
    } else {
        -parity_sign(piece(-t))
    }
}

/// Density `q(t) = t s(t)`.
pub fn q(t: f64) -> f64 {
    t * s(t)
}

/// `h(y) = int_0^y q(t) dt`, in closed form.
pub fn h(y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let t = math::abs(y);
    let m = piece(t);
    let sm = parity_sign(m);
    let lo = 1.0 / (m + 1.0);
    let partial = sm * (t * t - lo * lo) / 2.0;
    let tail = -sm * lo * lo / 2.0 + alternating_tail(m + 2.0);
    let v = partial + tail;
    if y < 0.0 {
        -v
    } else {
        v
    }
}

/// True when `t` is (the double nearest to) a corner `1/n`, `n >= 2`, of `h`.
pub fn is_corner(t: f64) -> bool {
    let t = math::abs(t);
    if t == 0.0 || t > 0.5 {
        return false;
    }
    let n = math::round(1.0 / t);
    n >= 2.0 && 1.0 / n == t
}
