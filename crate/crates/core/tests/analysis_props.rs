use mixpart::funcs::{builtin, Function2D, Rectangle};
use mixpart::lipcheck::{lipschitz_estimate, uniform_partial_lipschitz};
use mixpart::sampling::Stream;
use mixpart::strongdiff::{
    chebyshev_center, default_radii, deviation, quotients, strong_modulus, verify_theorem1,
    SamplerConfig,
};
use mixpart::tolstov::{integrate_density, verify_theorem2, QuadratureSpec};
use mixpart::{Axis, EvalError, Point};
use proptest::prelude::*;

type G = fn(f64, f64) -> Result<f64, EvalError>;

fn families() -> Vec<(G, (f64, f64))> {
    vec![
        (|x, _| Ok(x * x), (1.0, 0.0)),
        (|x, _| Ok(x.abs()), (0.0, 0.0)),
        (|x, z| Ok(libm::sin(3.0 * x) * (1.0 + z)), (0.2, 0.1)),
        (
            |x, _| {
                Ok(if x == 0.0 {
                    0.0
                } else {
                    x * x * libm::sin(1.0 / x)
                })
            },
            (0.0, 0.0),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chebyshev_center_is_optimal(seed in any::<u64>(), delta in 1e-3f64..0.3) {
        let cfg = SamplerConfig { seed, pairs_per_radius: 64 };
        for (g, at) in families() {
            let qs = quotients(&g, at, delta, &cfg).unwrap();
            let (l, m) = chebyshev_center(&qs);
            prop_assert_eq!(m, deviation(&qs, l));
            let mut rng = Stream::new(seed, 7);
            for _ in 0..100 {
                let other = l + (rng.unit() - 0.5) * 4.0 * (m + 1e-9);
                prop_assert!(m <= deviation(&qs, other), "L' = {} beats L = {}", other, l);
            }
        }
    }

    #[test]
    fn nested_curves_grow_with_radius(seed in any::<u64>(), l in -2.0f64..2.0) {
        let cfg = SamplerConfig { seed, pairs_per_radius: 32 };
        for (g, at) in families() {
            let c = strong_modulus(&g, at, l, &default_radii(1.0), &cfg).unwrap();
            prop_assert!(c.modulus.windows(2).all(|w| w[1] <= w[0]), "{:?}", c.modulus);
            prop_assert!(c.pair_count.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn adding_a_linear_term_shifts_the_slope(a in -5.0f64..5.0, delta in 1e-3f64..0.1) {
        let cfg = SamplerConfig::default();
        let g = |x: f64, _: f64| Ok(x * x * x);
        let ga = move |x: f64, z: f64| g(x, z).map(|v| v + a * x);
        let (l0, m0) = chebyshev_center(&quotients(&g, (0.5, 0.0), delta, &cfg).unwrap());
        let (l1, m1) = chebyshev_center(&quotients(&ga, (0.5, 0.0), delta, &cfg).unwrap());
        prop_assert!((l1 - l0 - a).abs() <= 1e-9, "{} vs {}", l1 - l0, a);
        prop_assert!((m1 - m0).abs() <= 1e-9);
    }

    #[test]
    fn lipschitz_scales_with_the_function(c in -4.0f64..4.0, pow in -3i32..4) {
        let f = builtin("smooth_poly").unwrap();
        let rect = f.domain();
        let base = uniform_partial_lipschitz(&f, Axis::X, Axis::Y, rect, 5, 32, 42).unwrap().k_hat;
        // powers of two scale every difference exactly
        let two = libm::exp2(f64::from(pow));
        let scaled = uniform_partial_lipschitz(&f.scaled(two), Axis::X, Axis::Y, rect, 5, 32, 42).unwrap().k_hat;
        prop_assert_eq!(scaled, two * base);
        let scaled = uniform_partial_lipschitz(&f.scaled(c), Axis::X, Axis::Y, rect, 5, 32, 42).unwrap().k_hat;
        prop_assert!((scaled - c.abs() * base).abs() <= 1e-6 * (1.0 + c.abs() * base));
    }

    #[test]
    fn more_samples_never_lower_the_estimate(n in 8usize..200, extra in 1usize..200, seed in any::<u64>()) {
        let g = |t: f64| Ok(libm::sin(5.0 * t) + t.abs());
        let a = lipschitz_estimate(g, (-1.0, 1.5), n, seed).unwrap().k_hat;
        let b = lipschitz_estimate(g, (-1.0, 1.5), n + extra, seed).unwrap().k_hat;
        prop_assert!(b >= a);
        // below the true constant 5 + 1
        prop_assert!(b <= 6.0);
    }

    #[test]
    fn witness_quotient_is_k_hat(n in 8usize..100, seed in any::<u64>()) {
        let g = |t: f64| Ok(t * t * t);
        let e = lipschitz_estimate(g, (-1.0, 1.0), n, seed).unwrap();
        let (p, q) = e.witness;
        prop_assert_eq!(((q * q * q - p * p * p) / (q - p)).abs(), e.k_hat);
        prop_assert!(e.k_hat <= 3.0);
    }
}

fn cos_density() -> Function2D {
    builtin("cos_density").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fubini_symmetry(x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let spec = QuadratureSpec::default();
        let h = Function2D::from_fn("h", Rectangle::square(0.0, 1.0), |u, v| libm::exp(u) * (1.0 + v * v) + u * v);
        let rect = h.domain();
        let f = integrate_density(&h, rect, spec).unwrap();
        let ft = integrate_density(&h.transposed(), rect.transposed(), spec).unwrap();
        let (a, b) = (f.eval(x, y).unwrap(), ft.eval(y, x).unwrap());
        prop_assert!((a - b).abs() <= 1e-6, "{} vs {}", a, b);
    }

    #[test]
    fn additivity_over_a_split(k in 1u32..32, x in 0.0f64..1.0, y in 0.0f64..1.0, m in 0.05f64..0.95) {
        let spec = QuadratureSpec::default();
        let h = cos_density();
        let whole = integrate_density(&h, Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap(), spec).unwrap();
        // a split on a panel node reproduces the same panels
        let node = f64::from(k) * spec.width();
        let left = integrate_density(&h, Rectangle::new(0.0, node, 0.0, 1.0).unwrap(), spec).unwrap();
        let right = integrate_density(&h, Rectangle::new(node, 1.0, 0.0, 1.0).unwrap(), spec).unwrap();
        if x >= node {
            let sum = left.eval(node, y).unwrap() + right.eval(x, y).unwrap();
            prop_assert!((whole.eval(x, y).unwrap() - sum).abs() <= 1e-14);
        }
        // anywhere else, up to the quadrature error
        let left = integrate_density(&h, Rectangle::new(0.0, m, 0.0, 1.0).unwrap(), spec).unwrap();
        let right = integrate_density(&h, Rectangle::new(m, 1.0, 0.0, 1.0).unwrap(), spec).unwrap();
        if x >= m {
            let sum = left.eval(m, y).unwrap() + right.eval(x, y).unwrap();
            prop_assert!((whole.eval(x, y).unwrap() - sum).abs() <= 1e-8);
        }
    }

    #[test]
    fn cubic_densities_are_exact(c in prop::array::uniform4(-2.0f64..2.0), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let [a, b, p, q] = c;
        let h = Function2D::from_fn("cubic", Rectangle::square(0.0, 1.0), move |u, v| a + b * u * v + p * u * u * v + q * v * v * v);
        let f = integrate_density(&h, h.domain(), QuadratureSpec::default()).unwrap();
        let want = a * x * y + b * x * x * y * y / 4.0 + p * x * x * x * y * y / 6.0 + q * x * y * y * y * y / 4.0;
        prop_assert!((f.eval(x, y).unwrap() - want).abs() <= 1e-13);
    }
}

#[test]
fn strong_mixed_report_is_reproducible() {
    let f = builtin("esser_shisha").unwrap();
    let cfg = SamplerConfig::default();
    let a = verify_theorem1(&f, Point::new(0.0, 0.0), &default_radii(1.0), 1e-6, &cfg).unwrap();
    let b = verify_theorem1(&f, Point::new(0.0, 0.0), &default_radii(1.0), 1e-6, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mixed_gap_shrinks_under_refinement() {
    let h = Function2D::from_fn("h", Rectangle::square(0.0, 1.0), |u, v| {
        libm::exp(u * v) + u * u * u * u * v
    });
    let mut last = f64::INFINITY;
    for ppu in [8, 16, 32] {
        let spec = QuadratureSpec {
            panels_per_unit: ppu,
            refinement_levels: 0,
        };
        let r = verify_theorem2(&h, h.domain(), spec, 7, 7, 1e-3).unwrap();
        let gap = r.max_gap_d21.max(r.max_gap_d12);
        assert!(gap <= 2.0 * last, "ppu {ppu}: {gap} after {last}");
        last = gap;
    }
}
