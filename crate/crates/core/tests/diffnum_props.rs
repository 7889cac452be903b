use mixpart::diffnum::{mixed_cross, partial, schwarz_audit, Scheme};
use mixpart::expr::parse;
use mixpart::funcs::{builtin, esser, from_expr, Function2D, Rectangle};
use mixpart::{Axis, Point};
use proptest::prelude::*;

fn corpus() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![
        "smooth_poly",
        "trig",
        "xy",
        "peano",
        "abs_mix",
        "esser_shisha",
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixed_cross_transpose_symmetry(
        name in corpus(),
        x in -0.8f64..0.8,
        y in -0.8f64..0.8,
        h in 1e-5f64..0.1,
        k in 1e-5f64..0.1,
    ) {
        let f = builtin(name).unwrap();
        let ft = f.transposed();
        let a = mixed_cross(&f, Point::new(x, y), h, k);
        let b = mixed_cross(&ft, Point::new(y, x), k, h);
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn central_difference_exact_on_quadratics(
        c in prop::array::uniform6(-4.0f64..4.0),
        x in -1.0f64..1.0,
        y in -1.0f64..1.0,
    ) {
        let [c0, c1, c2, c3, c4, c5] = c;
        let f = Function2D::from_fn("q", Rectangle::square(-2.0, 2.0), move |x, y| {
            c0 + c1 * x + c2 * y + c3 * x * x + c4 * x * y + c5 * y * y
        });
        let p = Point::new(x, y);
        // a wide power-of-two step: no truncation error, little rounding
        let d1 = partial(&f, Axis::X, p, Scheme::Central, Some(0.25));
        let d2 = partial(&f, Axis::Y, p, Scheme::Central, Some(0.25));
        prop_assert!((d1.value - (c1 + 2.0 * c3 * x + c4 * y)).abs() <= 1e-12, "{:?}", d1);
        prop_assert!((d2.value - (c2 + c4 * x + 2.0 * c5 * y)).abs() <= 1e-12, "{:?}", d2);
    }

    #[test]
    fn mixed_cross_exact_on_xy(x in -1.0f64..1.0, y in -1.0f64..1.0, h in 1e-3f64..0.5, k in 1e-3f64..0.5) {
        let f = from_expr(parse("x*y").unwrap(), Rectangle::square(-2.0, 2.0));
        let e = mixed_cross(&f, Point::new(x, y), h, k);
        prop_assert!((e.value - 1.0).abs() <= 1e-12, "{:?}", e);
    }

    #[test]
    fn peano_antisymmetry(x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let f = builtin("peano").unwrap();
        prop_assert_eq!(f.eval(x, y).unwrap(), -f.eval(y, x).unwrap());
    }

    #[test]
    fn esser_increment_bound(y1 in -1.0f64..1.0, y2 in -1.0f64..1.0) {
        let lhs = (esser::h(y2) - esser::h(y1)).abs();
        let rhs = y1.abs().max(y2.abs()) * (y2 - y1).abs();
        prop_assert!(lhs <= rhs + 1e-15, "{} > {}", lhs, rhs);
    }

    #[test]
    fn abs_mix_slope_is_one_lipschitz(x in -1.0f64..1.0, y1 in -1.0f64..1.0, y2 in -1.0f64..1.0) {
        let f = builtin("abs_mix").unwrap();
        let d = |y| f.oracle(mixpart::funcs::Oracle::D1, x, y).unwrap().unwrap();
        prop_assert!((d(y2) - d(y1)).abs() <= (y2 - y1).abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn audit_counts_are_conserved(name in corpus(), nx in 3usize..9, ny in 3usize..9, tol in 1e-8f64..1e-2) {
        let f = builtin(name).unwrap();
        let r = schwarz_audit(&f, f.domain(), nx, ny, tol);
        prop_assert_eq!(r.pass_count + r.mismatch_count + r.excluded_count, nx * ny);
        prop_assert!((r.pass_fraction + r.mismatch_fraction + r.excluded_fraction - 1.0).abs() < 1e-12);
        let decided: Vec<_> = r.nodes.iter().filter(|n| !n.delta.is_nan()).collect();
        if let Some(p) = r.argmax_point {
            prop_assert!(decided.iter().any(|n| n.x == p.x && n.y == p.y && n.delta == r.max_discrepancy));
            prop_assert!(decided.iter().all(|n| n.delta <= r.max_discrepancy));
        }
    }
}

#[test]
fn audits_are_bit_identical_across_runs() {
    for name in ["peano", "esser_shisha", "trig"] {
        let f = builtin(name).unwrap();
        let a = schwarz_audit(&f, f.domain(), 12, 10, 1e-5);
        let b = schwarz_audit(&f, f.domain(), 12, 10, 1e-5);
        let bits = |r: &mixpart::diffnum::SchwarzAuditReport| {
            r.nodes
                .iter()
                .map(|n| (n.d21.to_bits(), n.d12.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a.max_discrepancy.to_bits(), b.max_discrepancy.to_bits());
    }
}
