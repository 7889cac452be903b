//! Numerical verification of equality of mixed partial derivatives.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation: an expression front end ([`expr`]), a corpus of test
//! functions with analytic oracles ([`funcs`]), finite-difference estimators
//! and grid audits ([`diffnum`]), strong-differentiability moduli
//! ([`strongdiff`]), Lipschitz estimation of derivative slices
//! ([`lipcheck`]) and double-integral reconstruction ([`tolstov`]).
//!
//! File formats, report persistence and the command line live in the
//! `mixpart-cli` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diffnum;
pub mod error;
pub mod expr;
pub mod funcs;
pub mod lipcheck;
mod math;
pub mod sampling;
pub mod strongdiff;
pub mod tolstov;

pub use error::EvalError;

/// Coordinate axis of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    /// Component of `p` along this axis.
    #[inline]
    pub fn pick(self, p: Point) -> f64 {
        match self {
            Axis::X => p.x,
            Axis::Y => p.y,
        }
    }

    /// `p` moved by `t` along this axis.
    #[inline]
    pub fn shift(self, p: Point, t: f64) -> Point {
        match self {
            Axis::X => Point::new(p.x + t, p.y),
            Axis::Y => Point::new(p.x, p.y + t),
        }
    }

    /// `p` with its component along this axis replaced by `t`.
    #[inline]
    pub fn with(self, p: Point, t: f64) -> Point {
        match self {
            Axis::X => Point::new(t, p.y),
            Axis::Y => Point::new(p.x, t),
        }
    }
}

impl core::fmt::Display for Axis {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// A point of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn transposed(self) -> Self {
        Point::new(self.y, self.x)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}
