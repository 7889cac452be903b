use core::fmt::{self, Write};

use super::{BinaryOp, CmpOp, Cond, Expr, UnaryOp, Var};

// Binding strength of the construct a node prints as.
const IF: u8 = 0;
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

const OR: u8 = 0;
const AND: u8 = 1;
const REL: u8 = 2;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) if c.is_sign_negative() => UNARY,
        Expr::Const(_) | Expr::Var(_) => ATOM,
        Expr::Unary(UnaryOp::Neg, _) => UNARY,
        Expr::Unary(_, _) => ATOM,
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, _, _) => SUM,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, _, _) => PRODUCT,
        // a power prints as "base ^ exp" and may stand wherever a unary may
        Expr::Binary(BinaryOp::Pow, _, _) => UNARY + 1,
        Expr::Binary(BinaryOp::Min | BinaryOp::Max, _, _) => ATOM,
        Expr::If(_, _, _) => IF,
    }
}

fn cond_level(c: &Cond) -> u8 {
    match c {
        Cond::Or(_, _) => OR,
        Cond::And(_, _) => AND,
        Cond::Cmp(_, _, _) => REL,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        f.write_char('(')?;
        write_expr(f, e)?;
        f.write_char(')')
    } else {
        write_expr(f, e)
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    // Display gives the shortest representation that reads back exactly.
    write!(f, "{c}")
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => write_const(f, *c),
        Expr::Var(Var::X) => f.write_char('x'),
        Expr::Var(Var::Y) => f.write_char('y'),
        Expr::Unary(UnaryOp::Neg, inner) => {
            f.write_char('-')?;
            if matches!(**inner, Expr::Const(_)) {
                // keep "-(2)" from being read back as the literal -2
                f.write_char('(')?;
                write_expr(f, inner)?;
                f.write_char(')')
            } else {
                write_at(f, inner, UNARY)
            }
        }
        Expr::Unary(op, inner) => {
            let name = match op {
                UnaryOp::Abs => "abs",
                UnaryOp::Sin => "sin",
                UnaryOp::Cos => "cos",
                UnaryOp::Exp => "exp",
                UnaryOp::Log => "log",
                UnaryOp::Sqrt => "sqrt",
                UnaryOp::Sign => "sign",
                UnaryOp::Neg => unreachable!(),
            };
            write!(f, "{name}(")?;
            write_expr(f, inner)?;
            f.write_char(')')
        }
        Expr::Binary(op @ (BinaryOp::Min | BinaryOp::Max), l, r) => {
            f.write_str(if *op == BinaryOp::Min { "min(" } else { "max(" })?;
            write_expr(f, l)?;
            f.write_str(", ")?;
            write_expr(f, r)?;
            f.write_char(')')
        }
        Expr::Binary(BinaryOp::Pow, l, r) => {
            write_at(f, l, ATOM)?;
            f.write_str(" ^ ")?;
            write_at(f, r, UNARY)
        }
        Expr::Binary(op, l, r) => {
            let (sym, lhs, rhs) = match op {
                BinaryOp::Add => (" + ", SUM, PRODUCT),
                BinaryOp::Sub => (" - ", SUM, PRODUCT),
                BinaryOp::Mul => (" * ", PRODUCT, UNARY),
                BinaryOp::Div => (" / ", PRODUCT, UNARY),
                _ => unreachable!(),
            };
            write_at(f, l, lhs)?;
            f.write_str(sym)?;
            write_at(f, r, rhs)
        }
        Expr::If(c, t, e) => {
            f.write_str("if ")?;
            write_cond(f, c)?;
            f.write_str(" then ")?;
            write_expr(f, t)?;
            f.write_str(" else ")?;
            write_expr(f, e)
        }
    }
}

fn write_cond_at(f: &mut fmt::Formatter<'_>, c: &Cond, min: u8) -> fmt::Result {
    if cond_level(c) < min {
        f.write_char('(')?;
        write_cond(f, c)?;
        f.write_char(')')
    } else {
        write_cond(f, c)
    }
}

fn write_cond(f: &mut fmt::Formatter<'_>, c: &Cond) -> fmt::Result {
    match c {
        Cond::Cmp(op, l, r) => {
            write_at(f, l, SUM)?;
            f.write_str(match op {
                CmpOp::Lt => " < ",
                CmpOp::Le => " <= ",
                CmpOp::Eq => " == ",
            })?;
            write_at(f, r, SUM)
        }
        Cond::And(l, r) => {
            write_cond_at(f, l, AND)?;
            f.write_str(" and ")?;
            write_cond_at(f, r, REL)
        }
        Cond::Or(l, r) => {
            write_cond_at(f, l, OR)?;
            f.write_str(" or ")?;
            write_cond_at(f, r, AND)
        }
    }
}
