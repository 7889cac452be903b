//! Closed-form bivariate expressions.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr        = "if" condition "then" expr "else" expr | sum ;
//! condition   = conjunction { "or" conjunction } ;
//! conjunction = relation { "and" relation } ;
//! relation    = "(" condition ")" | sum cmp sum ;
//! cmp         = "<" | "<=" | "==" | ">" | ">=" ;
//! sum         = product { ( "+" | "-" ) product } ;
//! product     = unary { ( "*" | "/" ) unary } ;
//! unary       = "-" unary | power ;
//! power       = atom [ "^" unary ] ;
//! atom        = number | "x" | "y" | "(" expr ")"
//!             | func1 "(" expr ")" | func2 "(" expr "," expr ")" ;
//! func1       = "abs" | "sin" | "cos" | "exp" | "log" | "sqrt" | "sign" ;
//! func2       = "min" | "max" ;
//! number      = digits [ "." digits ] [ ( "e" | "E" ) [ "+" | "-" ] digits ]
//!             | "." digits [ exponent ] ;
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)`. A minus sign written directly in front of a number literal
//! (and not followed by `^`) is folded into a negative constant. `a > b`
//! and `a >= b` are read as `b < a` and `b <= a`.
//!
//! `==` is exact IEEE equality; it is meant for guards such as
//! `if x == 0 and y == 0 then 0 else ...`.

mod eval;
mod parse;
mod print;

use alloc::boxed::Box;
use core::fmt;

pub use parse::ParseError;

/// Independent variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
}

/// Real-valued expression node.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    If(Box<Cond>, Box<Expr>, Box<Expr>),
}

/// Boolean node; only appears as the guard of [`Expr::If`].
#[derive(Clone, Debug, PartialEq)]
pub enum Cond {
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

impl Expr {
    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn cond(c: Cond, then: Expr, otherwise: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(then), Box::new(otherwise))
    }

    /// Number of nodes, guards included.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, e) => 1 + e.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
            Expr::If(c, t, e) => 1 + c.size() + t.size() + e.size(),
        }
    }
}

impl Cond {
    pub fn cmp(op: CmpOp, l: Expr, r: Expr) -> Cond {
        Cond::Cmp(op, Box::new(l), Box::new(r))
    }

    pub fn size(&self) -> usize {
        match self {
            Cond::Cmp(_, l, r) => 1 + l.size() + r.size(),
            Cond::And(l, r) | Cond::Or(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// A parsed expression in `x` and `y`. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprAst {
    root: Expr,
}

impl ExprAst {
    pub fn new(root: Expr) -> Self {
        ExprAst { root }
    }

    pub fn parse(source: &str) -> Result<Self, ParseError> {
        parse::parse(source).map(ExprAst::new)
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn into_root(self) -> Expr {
        self.root
    }

    /// Evaluates in double precision. The untaken branch of a conditional is
    /// never evaluated.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, crate::EvalError> {
        eval::eval(&self.root, x, y)
    }
}

impl From<Expr> for ExprAst {
    fn from(root: Expr) -> Self {
        ExprAst::new(root)
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, &self.root)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self)
    }
}

impl core::str::FromStr for ExprAst {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExprAst::parse(s)
    }
}

pub fn parse(source: &str) -> Result<ExprAst, ParseError> {
    ExprAst::parse(source)
}

pub fn evaluate(ast: &ExprAst, x: f64, y: f64) -> Result<f64, crate::EvalError> {
    ast.eval(x, y)
}

/// Canonical text form; `parse(&pretty_print(a))` reproduces `a`.
pub fn pretty_print(ast: &ExprAst) -> alloc::string::String {
    use alloc::string::ToString;
    ast.to_string()
}
