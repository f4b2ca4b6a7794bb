//! Functional equations and η-quotient identities at random lattice shapes.

use latsum::modular::{dedekind_eta, special_value, theta1_prime, theta_constants, weber_quotients, SpecialQuantity};
use latsum::CanonicalLattice;
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn upper_half() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, 0.3f64..3.0).prop_map(|(x, y)| Complex64::new(x, y))
}

fn fundamental() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, 0.0f64..2.5).prop_map(|(x, dy)| Complex64::new(x, (1.0 - x * x).sqrt() + dy))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn eta_translation(tau in upper_half()) {
        let lhs = dedekind_eta(tau + 1.0).unwrap();
        let rhs = Complex64::from_polar(1.0, std::f64::consts::PI / 12.0) * dedekind_eta(tau).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn eta_inversion(tau in upper_half()) {
        let lhs = dedekind_eta(-tau.inv()).unwrap();
        let rhs = (-Complex64::i() * tau).sqrt() * dedekind_eta(tau).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn weber_product_and_octic(tau in fundamental()) {
        let w = weber_quotients(tau).unwrap();
        prop_assert!(rel(w.f * w.f1 * w.f2, Complex64::new(2f64.sqrt(), 0.0)) < 1e-12);
        prop_assert!(rel(w.f.powu(8), w.f1.powu(8) + w.f2.powu(8)) < 1e-12);
    }

    #[test]
    fn jacobi_quartic(tau in fundamental()) {
        let t = theta_constants(tau).unwrap();
        prop_assert!(rel(t.t3.powu(4), t.t2.powu(4) + t.t4.powu(4)) < 1e-12);
        prop_assert!(rel(t.t2 * t.t3 * t.t4, theta1_prime(tau).unwrap()) < 1e-12);
    }
}

#[test]
fn eta_at_canonical_points_matches_table() {
    for lat in CanonicalLattice::ALL {
        let eta = dedekind_eta(lat.tau()).unwrap();
        assert!(rel(eta, special_value(lat, SpecialQuantity::Eta)) < 1e-13, "{lat:?}");
        let w = weber_quotients(lat.tau()).unwrap();
        for (q, v) in [(SpecialQuantity::F, w.f), (SpecialQuantity::F1, w.f1), (SpecialQuantity::F2, w.f2)] {
            assert!(rel(v, special_value(lat, q)) < 1e-13, "{lat:?} {q:?}");
        }
    }
}

#[test]
fn eta_unreduced_series_agreement() {
    // direct product at τ = 0.3 + 1.7i, no reduction
    let tau = Complex64::new(0.3, 1.7);
    let q = (Complex64::i() * 2.0 * std::f64::consts::PI * tau).exp();
    let mut prod = (Complex64::i() * std::f64::consts::PI * tau / 12.0).exp();
    let mut qn = q;
    for _ in 0..60 {
        prod *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
    }
    assert!(rel(dedekind_eta(tau).unwrap(), prod) < 1e-13);
}

#[test]
fn g2_of_2i_from_theta() {
    let t3 = theta_constants(Complex64::i()).unwrap().t3;
    let pi = std::f64::consts::PI;
    let g2 = latsum::eisenstein::G(2, Complex64::new(0.0, 2.0)).unwrap();
    assert!(rel(g2, pi * pi / 8.0 * t3.powu(4) + pi / 2.0) < 1e-13);
}
