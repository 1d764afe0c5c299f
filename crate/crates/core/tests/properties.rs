use proptest::prelude::*;

use escape_lab_core::escape::{cylinder_lower_bound, poly_lower_bound, sigma_upper_bound};
use escape_lab_core::geodesic::{minimal_loop, SearchParams};
use escape_lab_core::warp::{eval_jet2, ManifoldSpec, WarpingFunction};

fn decay_families(alpha: f64) -> Vec<WarpingFunction> {
    vec![
        WarpingFunction::poly_decay(alpha).unwrap(),
        WarpingFunction::log_decay(alpha).unwrap(),
        WarpingFunction::WeiF,
        WarpingFunction::SqrtLogF,
        WarpingFunction::custom("(1 + r^2)^(-0.75)").unwrap(),
    ]
}

fn log_uniform() -> impl Strategy<Value = f64> {
    (-3.0..3.0f64).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_derivative_matches_central_difference(
        r in log_uniform(),
        alpha in 0.3..3.0f64,
    ) {
        for w in decay_families(alpha) {
            let step = 1e-5 * r;
            let j = eval_jet2(&w, r).unwrap();
            let fp = eval_jet2(&w, r + step).unwrap().value;
            let fm = eval_jet2(&w, r - step).unwrap().value;
            let fd = (fp - fm) / (2.0 * step);
            let scale = j.d1.abs().max(j.value / r).max(1e-12);
            prop_assert!(
                (j.d1 - fd).abs() <= 1e-5 * scale,
                "{w:?} at r={r}: d1={} fd={fd}", j.d1
            );
        }
    }

    #[test]
    fn second_derivative_matches_central_difference(
        r in log_uniform(),
        alpha in 0.3..3.0f64,
    ) {
        for w in decay_families(alpha) {
            // second differences lose ~half the mantissa; scale the step
            // and tolerance accordingly
            let step = 1e-4 * r;
            let j = eval_jet2(&w, r).unwrap();
            let fp = eval_jet2(&w, r + step).unwrap().value;
            let f0 = j.value;
            let fm = eval_jet2(&w, r - step).unwrap().value;
            let fd = (fp - 2.0 * f0 + fm) / (step * step);
            let scale = j.d2.abs().max(f0 / (r * r)).max(1e-9);
            prop_assert!(
                (j.d2 - fd).abs() <= 1e-4 * scale,
                "{w:?} at r={r}: d2={} fd={fd}", j.d2
            );
        }
    }

    #[test]
    fn decay_families_strictly_decrease(
        r in log_uniform(),
        factor in 1.01..10.0f64,
        alpha in 0.3..3.0f64,
    ) {
        for w in [
            WarpingFunction::poly_decay(alpha).unwrap(),
            WarpingFunction::log_decay(alpha).unwrap(),
        ] {
            let a = eval_jet2(&w, r).unwrap().value;
            let b = eval_jet2(&w, r * factor).unwrap().value;
            prop_assert!(b < a, "{w:?}: h({r}) = {a} vs h({}) = {b}", r * factor);
        }
    }

    #[test]
    fn constant_profile_is_flat_everywhere(r in log_uniform(), c in 0.1..10.0f64) {
        let w = WarpingFunction::constant(c).unwrap();
        let j = eval_jet2(&w, r).unwrap();
        prop_assert_eq!(j.value, c);
        prop_assert_eq!(j.d1, 0.0);
        prop_assert_eq!(j.d2, 0.0);
    }

    #[test]
    fn minimal_loop_invariants(alpha in 0.5..2.0f64, l in 1u64..200) {
        let spec = ManifoldSpec::new(
            3,
            WarpingFunction::LinearCone,
            WarpingFunction::poly_decay(alpha).unwrap(),
        )
        .unwrap();
        let m = minimal_loop(&spec, l, &SearchParams::default()).unwrap();
        prop_assert!(m.length > 0.0);
        prop_assert!(m.max_radius >= 0.0);
        // ratio bound: the excursion can never exceed half the length
        prop_assert!(m.max_radius / m.length <= 0.5 + 1e-12);
        if let (Some(k), Some(dphi)) = (m.k, m.delta_phi) {
            let residual = (k as f64 * dphi - l as f64).abs() / l as f64;
            prop_assert!(residual <= 1e-6, "clairaut residual {residual}");
        }
        // sandwich between the projection bound and the over-and-back bound
        let h = &spec.h;
        let lower = cylinder_lower_bound(m.max_radius, l, h).unwrap();
        let (upper, _) = sigma_upper_bound(h, l).unwrap();
        prop_assert!(lower <= m.length * (1.0 + 1e-9), "lower {lower} vs {}", m.length);
        prop_assert!(m.length <= upper + 1e-9, "upper {upper} vs {}", m.length);
    }

    #[test]
    fn subadditivity(alpha in 0.5..2.0f64, l in 1u64..60) {
        let spec = ManifoldSpec::new(
            3,
            WarpingFunction::LinearCone,
            WarpingFunction::poly_decay(alpha).unwrap(),
        )
        .unwrap();
        let params = SearchParams::default();
        let a = minimal_loop(&spec, l, &params).unwrap();
        let b = minimal_loop(&spec, 2 * l, &params).unwrap();
        prop_assert!(b.length <= 2.0 * a.length * (1.0 + 1e-9));
        prop_assert!(b.length >= a.length * (1.0 - 1e-9));
    }

    #[test]
    fn poly_bounds_ordered(alpha in 0.1..10.0f64) {
        let b = poly_lower_bound(alpha).unwrap();
        prop_assert!(b.basic > 0.0 && b.basic < 0.5);
        // the improved constant dominates the basic one on this range
        // (it is not capped at 1/2 and degenerates for very small alpha)
        prop_assert!(b.improved >= b.basic);
    }
}
