use super::{esser, Function2D, Oracle, Rectangle};
use crate::math::{abs, cos, sign, sin};
use crate::EvalError;

/// Stable corpus labels, in listing order.
pub const BUILTIN_NAMES: &[&str] = &[
    "smooth_poly",
    "trig",
    "xy",
    "peano",
    "abs_mix",
    "osc",
    "esser_shisha",
    "cos_density",
    "step_density",
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown builtin '{0}'")]
pub struct UnknownBuiltin(pub alloc::string::String);

/// Looks up a corpus member by label.
pub fn builtin(name: &str) -> Result<Function2D, UnknownBuiltin> {
    let unit = Rectangle::square(-1.0, 1.0);
    Ok(match name {
        "smooth_poly" => Function2D::from_fn(name, unit, |x, y| x * x * x * y + x * y * y)
            .with_oracle(Oracle::D1, |x, y| Ok(3.0 * x * x * y + y * y))
            .with_oracle(Oracle::D2, |x, y| Ok(x * x * x + 2.0 * x * y))
            .with_oracle(Oracle::D21, |x, y| Ok(3.0 * x * x + 2.0 * y))
            .with_oracle(Oracle::D12, |x, y| Ok(3.0 * x * x + 2.0 * y)),
        "trig" => Function2D::from_fn(name, Rectangle::square(-2.0, 2.0), |x, y| sin(x) * cos(y))
            .with_oracle(Oracle::D1, |x, y| Ok(cos(x) * cos(y)))
            .with_oracle(Oracle::D2, |x, y| Ok(-sin(x) * sin(y)))
            .with_oracle(Oracle::D21, |x, y| Ok(-cos(x) * sin(y)))
            .with_oracle(Oracle::D12, |x, y| Ok(-cos(x) * sin(y))),
        "xy" => Function2D::from_fn(name, unit, |x, y| x * y)
            .with_oracle(Oracle::D1, |_, y| Ok(y))
            .with_oracle(Oracle::D2, |x, _| Ok(x))
            .with_oracle(Oracle::D21, |_, _| Ok(1.0))
            .with_oracle(Oracle::D12, |_, _| Ok(1.0)),
        "peano" => peano(unit),
        "abs_mix" => Function2D::from_fn(name, unit, |x, y| x * abs(y))
            .with_oracle(Oracle::D1, |_, y| Ok(abs(y)))
            .with_oracle(Oracle::D2, |x, y| {
                if y != 0.0 {
                    Ok(x * sign(y))
                } else if x == 0.0 {
                    Ok(0.0)
                } else {
                    Err(EvalError::Undefined)
                }
            })
            .with_oracle(Oracle::D21, |_, y| nonzero_sign(y))
            .with_oracle(Oracle::D12, |_, y| nonzero_sign(y)),
        "osc" => Function2D::from_fn(name, unit, |x, _| {
            if x == 0.0 {
                0.0
            } else {
                x * x * sin(1.0 / x)
            }
        })
        .with_oracle(Oracle::D1, |x, _| {
            Ok(if x == 0.0 {
                0.0
            } else {
                2.0 * x * sin(1.0 / x) - cos(1.0 / x)
            })
        })
        .with_oracle(Oracle::D2, |_, _| Ok(0.0))
        .with_oracle(Oracle::D21, |_, _| Ok(0.0))
        .with_oracle(Oracle::D12, |_, _| Ok(0.0)),
        "esser_shisha" => Function2D::from_fn(name, unit, |x, y| x * esser::h(y))
            .with_oracle(Oracle::D1, |_, y| Ok(esser::h(y)))
            .with_oracle(Oracle::D2, |x, y| {
                if esser::is_corner(y) && x != 0.0 {
                    Err(EvalError::Undefined)
                } else {
                    Ok(x * esser::q(y))
                }
            })
            .with_oracle(Oracle::D21, |_, y| corner_free_q(y))
            .with_oracle(Oracle::D12, |_, y| corner_free_q(y)),
        "cos_density" => Function2D::from_fn(name, Rectangle::square(0.0, 1.0), |u, v| cos(u + v)),
        "step_density" => Function2D::from_fn(name, Rectangle::square(0.0, 1.0), |u, _| {
            if u < 0.5 {
                1.0
            } else {
                2.0
            }
        }),
        _ => return Err(UnknownBuiltin(name.into())),
    })
}

fn nonzero_sign(y: f64) -> Result<f64, EvalError> {
    if y == 0.0 {
        Err(EvalError::Undefined)
    } else {
        Ok(sign(y))
    }
}

fn corner_free_q(y: f64) -> Result<f64, EvalError> {
    if esser::is_corner(y) {
        Err(EvalError::Undefined)
    } else {
        Ok(esser::q(y))
    }
}

/// `xy(x^2 - y^2)/(x^2 + y^2)`, zero at the origin.
///
/// Mixed oracles are the symbolic derivative off the origin and the
/// iterated limits at it: `d21(0,0) = -1` from `d1(0,y) = -y`, and
/// `d12(0,0) = +1` by antisymmetry.
fn peano(domain: Rectangle) -> Function2D {
    Function2D::from_fn("peano", domain, |x, y| {
        if x == 0.0 && y == 0.0 {
            0.0
        } else {
            x * y * (x * x - y * y) / (x * x + y * y)
        }
    })
    .with_oracle(Oracle::D1, |x, y| {
        let r2 = x * x + y * y;
        Ok(if r2 == 0.0 {
            0.0
        } else {
            y * ((x * x * x * x) + 4.0 * x * x * y * y - (y * y * y * y)) / (r2 * r2)
        })
    })
    .with_oracle(Oracle::D2, |x, y| {
        let r2 = x * x + y * y;
        Ok(if r2 == 0.0 {
            0.0
        } else {
            x * ((x * x * x * x) - 4.0 * x * x * y * y - (y * y * y * y)) / (r2 * r2)
        })
    })
    .with_oracle(Oracle::D21, |x, y| Ok(peano_mixed(x, y).unwrap_or(-1.0)))
    .with_oracle(Oracle::D12, |x, y| Ok(peano_mixed(x, y).unwrap_or(1.0)))
}

fn peano_mixed(x: f64, y: f64) -> Option<f64> {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return None;
    }
    let (x2, y2) = (x * x, y * y);
    Some((x2 - y2) * (x2 * x2 + 10.0 * x2 * y2 + y2 * y2) / (r2 * r2 * r2))
}
