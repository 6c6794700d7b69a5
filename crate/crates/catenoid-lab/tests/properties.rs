//! Invariants over random parameters.

use catenoid_lab::boundary_geometry;
use catenoid_lab::profile::{self, ParamA};
use catenoid_lab::robin_spectrum::{self, ModeSector, PiconeBase, Polynomial};
use catenoid_lab::Tolerances;
use proptest::prelude::*;

fn pa(a: f64) -> ParamA {
    ParamA::new(a).unwrap()
}

proptest! {
    #[test]
    fn hyperboloid_constraint(a in 0.5001f64..50.0, s in -3.0f64..3.0) {
        let p = profile::eval_profile(pa(a), s);
        prop_assert!((p.a2 - p.b2 - 1.0).abs() <= 4.0 * f64::EPSILON * p.a2);
    }

    #[test]
    fn mori_identity(a in 0.5001f64..20.0, s in -2.5f64..2.5) {
        let scale = 1.0 + 2.0 * profile::b_squared(pa(a), s);
        prop_assert!(profile::mori_residual(pa(a), s).abs() < 1e-12 * scale);
    }

    #[test]
    fn embedded_curvature_matches_closed_form(a in 0.51f64..20.0, s in -2.0f64..2.0, phi in -1.0f64..1.0) {
        let closed = profile::second_fundamental_form_sq(pa(a), s);
        let embedded = profile::second_fundamental_form_sq_embedded(pa(a), s, phi);
        prop_assert!((closed - embedded).abs() < 1e-9 * (1.0 + closed));
    }

    #[test]
    fn mode_potential_gap(a in 0.5001f64..20.0, s in -2.5f64..2.5) {
        let b2 = profile::b_squared(pa(a), s);
        let gap = profile::potential_wk(pa(a), s, 2) - profile::potential_wk(pa(a), s, 1);
        prop_assert!((gap + 3.0 / b2).abs() < 1e-12 * (1.0 + 3.0 / b2));
    }

    #[test]
    fn twist_angle_is_odd(a in 0.51f64..10.0, s in 0.0f64..2.0) {
        let t = Tolerances::default();
        let plus = boundary_geometry::phi_angle(pa(a), s, &t).unwrap();
        let minus = boundary_geometry::phi_angle(pa(a), -s, &t).unwrap();
        prop_assert_eq!(plus, -minus);
    }

    #[test]
    fn param_rejects_outside_domain(a in -10.0f64..=0.5) {
        prop_assert!(ParamA::new(a).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sturm_shift_between_modes(a in 0.52f64..4.0, k in 0u32..3) {
        let t = Tolerances::default();
        let g = boundary_geometry::solve_s0(pa(a), &t).unwrap();
        let shift = f64::from((k + 1) * (k + 1) - k * k) / g.b2_s0();
        for sector in [ModeSector::even(k), ModeSector::odd(k)] {
            let lower = robin_spectrum::eigenvalues(&g, sector, 0, &t).unwrap().ground();
            let upper_sector = ModeSector::new(k + 1, sector.parity);
            let upper = robin_spectrum::eigenvalues(&g, upper_sector, 0, &t).unwrap().ground();
            prop_assert!(upper >= lower + shift - 1e-7, "{sector}: {upper} < {lower} + {shift}");
        }
    }

    #[test]
    fn picone_identity_random_polynomials(
        a in 0.6f64..3.0,
        k in 1u32..4,
        c in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let t = Tolerances::default();
        let g = boundary_geometry::solve_s0(pa(a), &t).unwrap();
        let full = Polynomial::new(c.clone());
        let check = robin_spectrum::picone_check(&g, k, PiconeBase::FStar, &full, &t).unwrap();
        prop_assert!(check.residual < 1e-6, "f*: {check:?}");
        let even = Polynomial::new(vec![c[0], 0.0, c[2]]);
        let check = robin_spectrum::picone_check(&g, k, PiconeBase::B, &even, &t).unwrap();
        prop_assert!(check.residual < 1e-6, "B: {check:?}");
    }
}
