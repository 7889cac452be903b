use super::{first_step, refine, DerivativeEstimate, Scheme};
use crate::funcs::Function2D;
use crate::{math, Axis, Point};

/// First partial of `f` along `axis` at `p`.
///
/// `h0` overrides the initial step of the step policy. When the requested
/// stencil cannot be evaluated the one-sided stencils are tried (forward,
/// then backward); the estimate is excluded only if all of them fail.
///
/// For the central and Richardson schemes the estimate also checks whether
/// the forward and backward slopes keep disagreeing as the step halves. At a
/// corner they do, and the error indicator is raised to half their gap, so a
/// central quotient of `|y|` at `0` comes back as `0` with indicator `1`.
pub fn partial(
    f: &Function2D,
    axis: Axis,
    p: Point,
    scheme: Scheme,
    h0: Option<f64>,
) -> DerivativeEstimate {
    let c = axis.pick(p);
    let h0 = match h0 {
        Some(h) if h > 0.0 && h.is_finite() => h,
        _ => first_step(c),
    };
    let mut slice = |t: f64| f.eval_at(axis.with(p, t));

    let fallbacks: &[Scheme] = match scheme {
        Scheme::Central | Scheme::Richardson => &[Scheme::Forward, Scheme::Backward],
        Scheme::Forward => &[Scheme::Backward],
        Scheme::Backward => &[Scheme::Forward],
    };
    let attempt = core::iter::once(scheme)
        .chain(fallbacks.iter().copied())
        .find_map(|s| refine(&mut slice, c, h0, s).map(|r| (s, r)));
    let Some((used, r)) = attempt else {
        return DerivativeEstimate::excluded(h0, scheme);
    };

    let mut indicator = r.indicator;
    if matches!(used, Scheme::Central | Scheme::Richardson) {
        if let Some(gap) = corner_gap(&mut slice, c, r.step) {
            indicator = indicator.max(gap / 2.0);
        }
    }
    DerivativeEstimate {
        value: r.value,
        step: r.step,
        scheme: used,
        error_indicator: indicator,
        excluded: false,
    }
}

/// Gap between forward and backward slopes at `h/2`, when it fails to shrink
/// from its value at `h` the way it does for a differentiable slice.
fn corner_gap<G, E>(g: &mut G, c: f64, h: f64) -> Option<f64>
where
    G: FnMut(f64) -> Result<f64, E>,
{
    let g0 = g(c).ok()?;
    let spread = |g: &mut G, h: f64| -> Option<(f64, f64)> {
        let (hi, lo) = (c + h, c - h);
        let (gp, gm) = (g(hi).ok()?, g(lo).ok()?);
        let fwd = (gp - g0) / (hi - c);
        let bwd = (g0 - gm) / (c - lo);
        let scale = math::abs(g0).max(math::abs(gp)).max(math::abs(gm));
        Some((math::abs(fwd - bwd), scale))
    };
    let (wide, scale) = spread(g, h)?;
    let (narrow, _) = spread(g, h / 2.0)?;
    // rounding alone moves the one-sided slopes by a few eps * |g| / h
    let floor = 64.0 * f64::EPSILON * scale / (h / 2.0) + 1e-12;
    (narrow > floor && narrow > 0.75 * wide).then_some(narrow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::funcs::{builtin, from_expr, Rectangle};

    fn expr(src: &str) -> Function2D {
        from_expr(parse(src).unwrap(), Rectangle::square(-2.0, 2.0))
    }

    #[test]
    fn smooth_poly_first_partial() {
        let f = builtin("smooth_poly").unwrap();
        // d1 = 3x^2 y + y^2 = 4 at (1,1); (1,1) is a corner of the domain,
        // so this also exercises the one-sided fallback
        let e = partial(&f, Axis::X, Point::new(1.0, 1.0), Scheme::Central, None);
        assert!(!e.excluded);
        assert!((e.value - 4.0).abs() < 1e-8, "{e:?}");
        let e = partial(&f, Axis::X, Point::new(0.5, 0.5), Scheme::Central, None);
        assert!((e.value - (0.375 + 0.25)).abs() < 1e-8, "{e:?}");
        assert_eq!(e.scheme, Scheme::Central);
    }

    #[test]
    fn linear_is_exact() {
        let f = expr("x");
        for p in [
            Point::new(0.0, 0.0),
            Point::new(1.3, -0.7),
            Point::new(-1.9, 1.0),
        ] {
            let e = partial(&f, Axis::X, p, Scheme::Central, None);
            assert_eq!(e.value, 1.0, "{p:?}");
        }
    }

    #[test]
    fn quadratics_are_exact_with_a_wide_step() {
        let f = expr("3*x^2 - 2*x*y + 0.5*y^2 + x - 4");
        for &(x, y) in &[(0.3, 0.2), (-1.1, 0.7), (1.5, -1.5)] {
            let e = partial(&f, Axis::X, Point::new(x, y), Scheme::Central, Some(0.25));
            assert!(
                (e.value - (6.0 * x - 2.0 * y + 1.0)).abs() <= 1e-12,
                "{e:?}"
            );
            let e = partial(&f, Axis::Y, Point::new(x, y), Scheme::Central, Some(0.25));
            assert!((e.value - (-2.0 * x + y)).abs() <= 1e-12, "{e:?}");
        }
    }

    #[test]
    fn corner_is_flagged() {
        let f = builtin("abs_mix").unwrap();
        // one-sided slopes of x|y| in y at (1, 0) are +1 and -1
        let fwd = (f.eval(1.0, 1e-6).unwrap() - f.eval(1.0, 0.0).unwrap()) / 1e-6;
        let bwd = (f.eval(1.0, 0.0).unwrap() - f.eval(1.0, -1e-6).unwrap()) / 1e-6;
        assert_eq!((fwd, bwd), (1.0, -1.0));
        let e = partial(&f, Axis::Y, Point::new(0.5, 0.0), Scheme::Central, None);
        assert_eq!(e.value, 0.0);
        assert!(e.error_indicator >= 0.5, "{e:?}");
        // and a smooth point is not
        let e = partial(&f, Axis::Y, Point::new(0.5, 0.3), Scheme::Central, None);
        assert!(e.error_indicator < 1e-9, "{e:?}");
    }

    #[test]
    fn richardson_improves_order() {
        let f = expr("sin(x) * exp(y)");
        let p = Point::new(0.4, 0.1);
        let want = libm::cos(0.4) * libm::exp(0.1);
        let e = partial(&f, Axis::X, p, Scheme::Richardson, Some(0.05));
        assert!((e.value - want).abs() < 1e-9, "{e:?}");
        assert_eq!(e.scheme, Scheme::Richardson);
    }

    #[test]
    fn falls_back_to_one_sided_then_excludes() {
        // log(x) undefined left of 0: central fails near 0, forward works
        let f = from_expr(
            parse("log(x)").unwrap(),
            Rectangle::new(0.0, 2.0, 0.0, 1.0).unwrap(),
        );
        let e = partial(
            &f,
            Axis::X,
            Point::new(1e-3, 0.5),
            Scheme::Central,
            Some(4e-3),
        );
        assert_eq!(e.scheme, Scheme::Forward);
        assert!((e.value - 1e3).abs() / 1e3 < 1e-3, "{e:?}");
        // nowhere defined along the slice
        let g = from_expr(parse("1/(y - 0.5)").unwrap(), Rectangle::square(0.0, 1.0));
        let e = partial(&g, Axis::X, Point::new(0.5, 0.5), Scheme::Central, None);
        assert!(e.excluded);
        assert!(e.value.is_nan());
        assert_eq!(e.ok(), None);
    }
}
