use coulomb_wkb::exactref::exact_quad;
use coulomb_wkb::wkb::wkb_quad;
use coulomb_wkb::{ComplexParams, CoulombError, CoulombQuad, Omega};
use num_complex::Complex64;
use proptest::prelude::*;

// F, F', G, G' from mpmath at 40 digits.
const REFERENCE: [(f64, f64, f64, [f64; 4]); 3] = [
    (0.0, 1.0, 5.0, [0.6849374120059439677, -0.7236423862556063963, -0.89841435909202054869, -0.51080475851903501058]),
    (3.0, 5.0, 25.0, [0.50854150720433987713, -0.78626523380169264022, -1.0259326913849444328, -0.3801947133210661284]),
    (1.5, 2.0, 8.0, [0.90682376075614785104, -0.58201665220909552256, -0.81073991804741920208, -0.58240188440296566403]),
];

#[test]
fn exact_backend_matches_reference() {
    for (ell, eta, rho, want) in REFERENCE {
        let q = exact_quad(&ComplexParams::real(ell, eta, rho).unwrap()).unwrap();
        for (got, w) in q.as_array().iter().zip(want) {
            assert!((got - w).norm() <= 1e-9 * w.abs(), "l = {ell}, eta = {eta}, rho = {rho}: {got} vs {w}");
        }
    }
}

#[test]
fn wkb_backend_within_a_few_percent() {
    for (ell, eta, rho, want) in REFERENCE.into_iter().skip(1) {
        let q = wkb_quad(&ComplexParams::real(ell, eta, rho).unwrap()).unwrap();
        let amplitude = want[0].hypot(want[2]);
        for (got, w) in q.as_array().iter().zip(want) {
            assert!((got - w).norm() <= 0.05 * amplitude, "l = {ell}, eta = {eta}, rho = {rho}: {got} vs {w}");
        }
    }
}

#[test]
fn outgoing_and_incoming_rebuild_the_pair() {
    let p = ComplexParams::new(Complex64::new(2.0, 1.0), Complex64::new(10.0, 1.0), Complex64::new(20.0, 5.0)).unwrap();
    let q = exact_quad(&p).unwrap();
    let back = CoulombQuad::from_h_pair(q.h(Omega::Plus), q.h(Omega::Minus));
    for (a, b) in q.as_array().iter().zip(back.as_array()) {
        assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
    }
}

#[test]
fn invalid_rho_is_rejected() {
    assert!(matches!(ComplexParams::real(2.0, 10.0, -3.0), Err(CoulombError::CutRay(_))));
    assert!(ComplexParams::real(2.0, 10.0, 0.0).is_err());
    assert!(ComplexParams::real(2.0, f64::NAN, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wkb_wronskian_is_one_for_real_parameters(ell in 0.0f64..6.0, eta in 1.0f64..25.0, rho in 0.5f64..80.0) {
        let p = ComplexParams::real(ell, eta, rho).unwrap();
        if let Ok(q) = wkb_quad(&p) {
            prop_assert!(q.scaled_wronskian_error() <= 1e-11, "{:?}: {:e}", p, q.scaled_wronskian_error());
        }
    }

    #[test]
    fn backends_agree_beyond_the_turning_point(eta in 8.0f64..25.0, factor in 1.3f64..3.0) {
        let rho_t = eta + (eta * eta + 6.0).sqrt();
        let p = ComplexParams::real(2.0, eta, factor * rho_t).unwrap();
        let (w, e) = (wkb_quad(&p).unwrap(), exact_quad(&p).unwrap());
        let amplitude = e.f.norm().hypot(e.g.norm());
        prop_assert!((w.f - e.f).norm() <= 0.03 * amplitude);
        prop_assert!((w.g - e.g).norm() <= 0.03 * amplitude);
    }
}
