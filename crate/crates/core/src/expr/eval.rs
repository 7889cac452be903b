use super::{BinaryOp, CmpOp, Cond, Expr, UnaryOp, Var};
use crate::math;
use crate::EvalError;

fn finite(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

pub(super) fn eval(e: &Expr, x: f64, y: f64) -> Result<f64, EvalError> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(Var::X) => Ok(x),
        Expr::Var(Var::Y) => Ok(y),
        Expr::Unary(op, a) => {
            let v = eval(a, x, y)?;
            match op {
                UnaryOp::Neg => Ok(-v),
                UnaryOp::Abs => Ok(math::abs(v)),
                UnaryOp::Sin => finite(math::sin(v)),
                UnaryOp::Cos => finite(math::cos(v)),
                UnaryOp::Exp => finite(math::exp(v)),
                UnaryOp::Log if v <= 0.0 => Err(EvalError::LogOfNonPositive),
                UnaryOp::Log => finite(math::ln(v)),
                UnaryOp::Sqrt if v < 0.0 => Err(EvalError::SqrtOfNegative),
                UnaryOp::Sqrt => Ok(math::sqrt(v)),
                UnaryOp::Sign => Ok(math::sign(v)),
            }
        }
        Expr::Binary(op, a, b) => {
            let l = eval(a, x, y)?;
            let r = eval(b, x, y)?;
            match op {
                BinaryOp::Add => finite(l + r),
                BinaryOp::Sub => finite(l - r),
                BinaryOp::Mul => finite(l * r),
                BinaryOp::Div if r == 0.0 => Err(EvalError::DivisionByZero),
                BinaryOp::Div => finite(l / r),
                BinaryOp::Pow => pow(l, r),
                BinaryOp::Min => Ok(if r < l { r } else { l }),
                BinaryOp::Max => Ok(if r > l { r } else { l }),
            }
        }
        Expr::If(c, t, otherwise) => {
            if test(c, x, y)? {
                eval(t, x, y)
            } else {
                eval(otherwise, x, y)
            }
        }
    }
}

fn pow(base: f64, exp: f64) -> Result<f64, EvalError> {
    if base == 0.0 && exp < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    let v = math::pow(base, exp);
    if v.is_nan() {
        Err(EvalError::NonRealPower)
    } else {
        finite(v)
    }
}

fn test(c: &Cond, x: f64, y: f64) -> Result<bool, EvalError> {
    match c {
        Cond::Cmp(op, a, b) => {
            let l = eval(a, x, y)?;
            let r = eval(b, x, y)?;
            Ok(match op {
                CmpOp::Lt => l < r,
                CmpOp::Le => l <= r,
                CmpOp::Eq => l == r,
            })
        }
        Cond::And(a, b) => Ok(test(a, x, y)? && test(b, x, y)?),
        Cond::Or(a, b) => Ok(test(a, x, y)? || test(b, x, y)?),
    }
}
