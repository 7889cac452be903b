//! Rectangles, evaluatable bivariate functions and the built-in corpus.

mod builtins;
pub mod esser;

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::expr::ExprAst;
use crate::{Axis, EvalError, Point};

pub use builtins::{builtin, BUILTIN_NAMES};

/// Pointwise evaluator shared by functions and their oracles.
pub type Eval2 = Arc<dyn Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("rectangle bounds must be finite")]
    NotFinite,
    #[error("rectangle must satisfy a < b and c < d")]
    Empty,
}

/// Open rectangle `(a, b) x (c, d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rectangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rectangle {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, DomainError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(DomainError::NotFinite);
        }
        if !(a < b && c < d) {
            return Err(DomainError::Empty);
        }
        Ok(Rectangle { a, b, c, d })
    }

    /// `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64) -> Self {
        Rectangle::new(lo, hi, lo, hi).expect("square bounds")
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn height(&self) -> f64 {
        self.d - self.c
    }

    /// Bounds along `axis`.
    pub fn span(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.a, self.b),
            Axis::Y => (self.c, self.d),
        }
    }

    /// Closed-rectangle membership.
    pub fn contains(&self, p: Point) -> bool {
        self.a <= p.x && p.x <= self.b && self.c <= p.y && p.y <= self.d
    }

    /// Distance from `p` to the boundary along each axis, the smaller one.
    pub fn margin(&self, p: Point) -> f64 {
        let mx = (p.x - self.a).min(self.b - p.x);
        let my = (p.y - self.c).min(self.d - p.y);
        mx.min(my)
    }

    pub fn transposed(&self) -> Self {
        Rectangle {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
        }
    }

    /// Half of the shorter side.
    pub fn half_extent(&self) -> f64 {
        0.5 * self.width().min(self.height())
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// Which analytic oracle to look up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// First partial in `x`.
    D1,
    /// First partial in `y`.
    D2,
    /// Differentiate in `x`, then in `y`.
    D21,
    /// Differentiate in `y`, then in `x`.
    D12,
}

/// A real function on a rectangle, with whatever analytic derivatives are
/// known for it.
///
/// Evaluation outside the (closed) domain returns
/// [`EvalError::OutOfDomain`].
#[derive(Clone)]
pub struct Function2D {
    label: String,
    domain: Rectangle,
    f: Eval2,
    d1: Option<Eval2>,
    d2: Option<Eval2>,
    d21: Option<Eval2>,
    d12: Option<Eval2>,
}

impl fmt::Debug for Function2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Function2D")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .field("d21", &self.d21.is_some())
            .field("d12", &self.d12.is_some())
            .finish()
    }
}

fn arc<F>(f: F) -> Eval2
where
    F: Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
{
    Arc::new(f)
}

impl Function2D {
    pub fn new<F>(label: impl Into<String>, domain: Rectangle, f: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    {
        Function2D {
            label: label.into(),
            domain,
            f: arc(f),
            d1: None,
            d2: None,
            d21: None,
            d12: None,
        }
    }

    /// Infallible closure convenience.
    pub fn from_fn<F>(label: impl Into<String>, domain: Rectangle, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Function2D::new(label, domain, move |x, y| Ok(f(x, y)))
    }

    pub fn with_oracle<F>(mut self, which: Oracle, g: F) -> Self
    where
        F: Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    {
        let g = Some(arc(g));
        match which {
            Oracle::D1 => self.d1 = g,
            Oracle::D2 => self.d2 = g,
            Oracle::D21 => self.d21 = g,
            Oracle::D12 => self.d12 = g,
        }
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Rectangle {
        self.domain
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        if !self.domain.contains(Point::new(x, y)) {
            return Err(EvalError::OutOfDomain);
        }
        (self.f)(x, y)
    }

    #[inline]
    pub fn eval_at(&self, p: Point) -> Result<f64, EvalError> {
        self.eval(p.x, p.y)
    }

    pub fn has_oracle(&self, which: Oracle) -> bool {
        self.oracle_fn(which).is_some()
    }

    fn oracle_fn(&self, which: Oracle) -> Option<&Eval2> {
        match which {
            Oracle::D1 => self.d1.as_ref(),
            Oracle::D2 => self.d2.as_ref(),
            Oracle::D21 => self.d21.as_ref(),
            Oracle::D12 => self.d12.as_ref(),
        }
    }

    /// Analytic derivative value, `None` when no oracle is attached.
    pub fn oracle(&self, which: Oracle, x: f64, y: f64) -> Option<Result<f64, EvalError>> {
        let g = self.oracle_fn(which)?;
        if !self.domain.contains(Point::new(x, y)) {
            return Some(Err(EvalError::OutOfDomain));
        }
        Some(g(x, y))
    }

    /// `f^T(x, y) = f(y, x)` on the transposed rectangle, oracles carried over.
    pub fn transposed(&self) -> Function2D {
        let swap = |g: &Option<Eval2>| -> Option<Eval2> {
            g.as_ref().map(|g| {
                let g = g.clone();
                arc(move |x, y| g(y, x))
            })
        };
        let f = self.f.clone();
        Function2D {
            label: alloc::format!("{}^T", self.label),
            domain: self.domain.transposed(),
            f: arc(move |x, y| f(y, x)),
            d1: swap(&self.d2),
            d2: swap(&self.d1),
            d21: swap(&self.d12),
            d12: swap(&self.d21),
        }
    }

    /// `c * f`, oracles scaled alike.
    pub fn scaled(&self, c: f64) -> Function2D {
        let scale = |g: &Option<Eval2>| -> Option<Eval2> {
            g.as_ref().map(|g| {
                let g = g.clone();
                arc(move |x, y| g(x, y).map(|v| c * v))
            })
        };
        let f = self.f.clone();
        Function2D {
            label: alloc::format!("{}*{}", c, self.label),
            domain: self.domain,
            f: arc(move |x, y| f(x, y).map(|v| c * v)),
            d1: scale(&self.d1),
            d2: scale(&self.d2),
            d21: scale(&self.d21),
            d12: scale(&self.d12),
        }
    }

    /// Same function restricted to (or relabelled on) another rectangle.
    pub fn on(mut self, domain: Rectangle) -> Function2D {
        self.domain = domain;
        self
    }
}

/// Wraps a parsed expression; no oracles.
pub fn from_expr(ast: ExprAst, domain: Rectangle) -> Function2D {
    let label = alloc::format!("{ast}");
    Function2D::new(label, domain, move |x, y| ast.eval(x, y))
}
