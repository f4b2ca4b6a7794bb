//! Transformation laws, symmetry zeros and oracle agreement for σₙ⁽ᵐ⁾.

use std::f64::consts::PI;

use latsum::eisenstein::{
    extraordinary, ramanujan_ring_deriv, regularize, sigma, sigma_exact, sigma_regularized, sigma_zero_dirichlet,
    transform_tau_inverse, Convergence, G, G_deriv, G_recursive,
};
use latsum::oracle::{sigma_direct, PointStream, TailModel};
use latsum::{CanonicalLattice, LatticeSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn tau_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, 0.6f64..3.0).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn regularized_inversion_law(tau in tau_strategy(), k in 1u32..=4) {
        let m = 2 * k;
        let lhs = sigma_regularized(2, m, tau).unwrap();
        let at_inv = sigma_regularized(2, m, -tau.inv()).unwrap();
        let rhs = tau.norm().powi(m as i32 - 2) / tau.powu(m) * at_inv;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()).max(1e-300));
    }

    #[test]
    fn unregularized_violation_is_the_bracket(tau in tau_strategy(), k in 1u32..=4) {
        let m = 2 * k;
        let lhs = sigma(2, m, tau).unwrap().value;
        let at_inv = sigma(2, m, -tau.inv()).unwrap().value;
        let violation = lhs - tau.norm().powi(m as i32 - 2) / tau.powu(m) * at_inv;
        let bracket = extraordinary(m, tau) * (1.0 - tau.norm().powi(m as i32) / tau.powu(m));
        prop_assert!((violation - bracket).norm() <= 1e-10 * lhs.norm().max(bracket.norm()));
    }

    #[test]
    fn periodicity(tau in tau_strategy(), n in 1u32..=3, k in 0u32..=4) {
        let (n, m) = (2 * n, 2 * k);
        prop_assume!(!(n == 2 && m == 0));
        let a = sigma(n, m, tau).unwrap().value;
        let b = sigma(n, m, tau + 1.0).unwrap().value;
        prop_assert!(rel(b, a) <= 1e-12);
    }

    #[test]
    fn transform_round_trip_matches_engine(tau in tau_strategy(), n in 1u32..=3, k in 1u32..=4) {
        let (n, m) = (2 * n, 2 * k);
        let v = sigma(n, m, tau).unwrap();
        let moved = transform_tau_inverse(v).unwrap();
        let direct = sigma(n, m, -tau.inv()).unwrap();
        prop_assert!(rel(moved.value, direct.value) <= 1e-10);
    }

    #[test]
    fn rectangular_values_are_real(y in 0.6f64..3.0, n in 1u32..=3, k in 0u32..=5) {
        let (n, m) = (2 * n, 2 * k);
        prop_assume!(!(n == 2 && m == 0));
        let v = sigma(n, m, c(0.0, y)).unwrap().value;
        prop_assert!(v.im.abs() <= 1e-12 * v.norm().max(1.0));
    }
}

#[test]
fn regularization_offsets_by_extraordinary_term() {
    let tau = c(0.2, 1.3);
    for m in [2u32, 4, 6, 10] {
        let raw = sigma(2, m, tau).unwrap();
        assert_eq!(raw.convergence, Convergence::EisensteinOrder);
        let reg = regularize(raw).value;
        assert_eq!(reg.convergence, Convergence::Regularized);
        assert!(((raw.value - reg.value).re - 2.0 * PI / (m as f64 * tau.im)).abs() < 1e-14);
        assert_eq!(regularize(reg).value, reg);
    }
    assert!(regularize(sigma(4, 4, tau).unwrap()).warning.is_some());
    assert!(sigma(2, 0, tau).is_err());
}

#[test]
fn symmetry_zeros() {
    let sq = CanonicalLattice::Square.tau();
    let hex = CanonicalLattice::Hexagonal.tau();
    for n in [2u32, 4, 6] {
        for m in (0..=14).step_by(2) {
            if n == 2 && m == 0 {
                continue;
            }
            let scale = sigma(n, 12, sq).unwrap().value.norm().max(1.0);
            if m % 4 != 0 {
                assert!(sigma_regularized(n, m, sq).unwrap().norm() < 1e-12 * scale, "square ({n},{m})");
            }
            if m % 6 != 0 {
                assert!(sigma_regularized(n, m, hex).unwrap().norm() < 1e-12 * scale, "hex ({n},{m})");
            }
        }
    }
}

#[test]
fn ramanujan_identities_from_closed_forms() {
    use CanonicalLattice::*;
    let v = |n, lat| sigma_exact(n, n, lat).unwrap().value();
    // iπG₄′(2i) = 7G₆ − 2G₂G₄ with the derivative from the Fourier series
    let lhs = Complex64::i() * PI * G_deriv(4, 1, Rect2.tau()).unwrap();
    let rhs = 7.0 * v(6, Rect2) - 2.0 * v(2, Rect2) * v(4, Rect2);
    assert!((lhs.re - rhs).abs() < 1e-12 * rhs.abs() && lhs.im.abs() < 1e-12 * rhs.abs());
    // 7iπG₆′(i) = 30G₄² − 21G₂G₆ with G₆(i) = 0
    let lhs = 7.0 * Complex64::i() * PI * G_deriv(6, 1, Square.tau()).unwrap();
    let rhs = 30.0 * v(4, Square).powi(2);
    assert!((lhs.re - rhs).abs() < 1e-12 * rhs);
    // 2iπG₂′(i) = 5G₄ − G₂²
    let lhs = 2.0 * Complex64::i() * PI * G_deriv(2, 1, Square.tau()).unwrap();
    let rhs = 5.0 * v(4, Square) - PI * PI;
    assert!((lhs.re - rhs).abs() < 1e-12 * rhs.abs());
}

#[test]
fn ring_derivatives_match_fourier() {
    for tau in [c(0.1, 0.9), c(-0.3, 1.4), c(0.45, 1.0), c(0.0, 2.2), c(0.7, 0.8)] {
        let vals = [G(2, tau).unwrap(), G(4, tau).unwrap(), G(6, tau).unwrap()];
        let d = ramanujan_ring_deriv(vals, 2);
        for (i, n) in [2u32, 4, 6].into_iter().enumerate() {
            assert!(rel(d[2][i], G_deriv(n, 2, tau).unwrap()) < 1e-10, "{tau} n={n}");
        }
    }
}

#[test]
fn first_derivative_matches_finite_difference() {
    let tau = c(0.2, 1.4);
    let h = 1e-5;
    let fd = (G(4, tau + h).unwrap() - G(4, tau - h).unwrap()) / (2.0 * h);
    assert!(rel(fd, G_deriv(4, 1, tau).unwrap()) < 1e-7);
    assert_eq!(G_deriv(4, 0, tau).unwrap(), G(4, tau).unwrap());
}

#[test]
fn recursion_special_cases() {
    let i = c(0.0, 1.0);
    assert!(rel(G_recursive(8, i).unwrap(), 3.0 / 7.0 * G(4, i).unwrap().powu(2)) < 1e-13);
    let tau = c(0.1, 1.2);
    let (g4, g6) = (G(4, tau).unwrap(), G(6, tau).unwrap());
    assert!(rel(11.0 * G_recursive(10, tau).unwrap(), 5.0 * g4 * g6) < 1e-13);
    assert!(rel(143.0 * G_recursive(12, tau).unwrap(), 18.0 * g4.powu(3) + 25.0 * g6 * g6) < 1e-13);
}

#[test]
fn g4_at_half_i() {
    let g = G(4, c(0.0, 2.0)).unwrap();
    assert!(rel(G(4, c(0.0, 0.5)).unwrap(), 16.0 * g) < 1e-12);
}

#[test]
fn below_diagonal_matches_direct_sum() {
    let tau = c(0.4, 1.1);
    let spec = LatticeSpec::new(tau, 1.0).unwrap();
    let stream = PointStream::direct(&spec, 100.0);
    let direct = sigma_direct(&stream, 6, 2);
    assert_eq!(direct.tail_model, TailModel::Bound);
    let engine = sigma(6, 2, tau).unwrap().value;
    assert!((engine - direct.value).norm() < 1e-6);
    assert!((engine - direct.value).norm() <= direct.tail_estimate);
}

#[test]
fn dirichlet_closed_forms_match_direct_sums() {
    for lat in CanonicalLattice::ALL {
        let stream = PointStream::direct(&LatticeSpec::canonical(lat, 1.0).unwrap(), 300.0);
        for s in [2u32, 3] {
            let exact = sigma_zero_dirichlet(s, lat).unwrap();
            let direct = sigma_direct(&stream, 2 * s, 0);
            assert!((direct.value.re - exact).abs() <= direct.tail_estimate, "{lat:?} s={s}");
            assert!(rel(sigma(2 * s, 0, lat.tau()).unwrap().value, c(exact, 0.0)) < 1e-12, "{lat:?} s={s}");
        }
    }
}
