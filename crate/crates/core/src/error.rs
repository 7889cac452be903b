use thiserror::Error;

/// Failure to produce a real value at a point.
///
/// Numeric modules treat a failed evaluation as an excluded sample and count
/// it; nothing in the crate panics on one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive number")]
    LogOfNonPositive,
    #[error("square root of a negative number")]
    SqrtOfNegative,
    #[error("power has no real value")]
    NonRealPower,
    #[error("result is not finite")]
    NonFinite,
    #[error("point lies outside the function's domain")]
    OutOfDomain,
    #[error("value is undefined at this point")]
    Undefined,
    #[error("too many quadrature nodes failed to evaluate")]
    QuadratureFailure,
}
