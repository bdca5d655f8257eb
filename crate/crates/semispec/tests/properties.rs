//! Randomized invariants over the symbol and weight machinery.

use proptest::prelude::*;
use semispec::config::catalog;
use semispec::symbols::{flatten_symbol, PhasePoint};
use semispec::weight::{g_profile, j_profile, modified_symbol, WeightParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_profile_decreasing_in_unit_range(a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let ga = g_profile(lo).unwrap();
        let gb = g_profile(hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&ga));
        prop_assert!(gb <= ga + 1e-12);
    }

    #[test]
    fn j_profile_is_odd(t in -2.0f64..2.0) {
        prop_assert!((j_profile(t) + j_profile(-t)).abs() < 1e-15);
    }

    #[test]
    fn phase_point_coords_round_trip(x in -10.0f64..10.0, xi in -10.0f64..10.0) {
        let pt = PhasePoint::dim1(x, xi);
        let back = PhasePoint::from_coords(&pt.coords());
        prop_assert_eq!(pt, back);
    }

    #[test]
    fn modified_symbol_interpolation_bound(
        x in -6.0f64..6.0,
        xi in -6.0f64..6.0,
        eps in 1e-4f64..1.0,
    ) {
        let cfg = catalog("flat-well-1d").unwrap();
        let spec = flatten_symbol(&cfg.spec, 4.0).unwrap();
        let params = WeightParams::new(eps, 0.1, 1.0);
        let pt = PhasePoint::dim1(x, xi);
        let m = modified_symbol(&spec, &params, &pt).unwrap();
        let re = spec.p0_value(&pt).unwrap().re;
        prop_assert!(m >= -1e-12);
        prop_assert!(m <= re + 1e-12);
    }
}
