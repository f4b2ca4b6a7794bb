//! Enumeration, duality and τ-reduction properties of Bravais lattices.

use std::f64::consts::PI;

use latsum::lattice::{direct_points, eisenstein_ordered_rows, reciprocal_points, reduce_tau, TauMove};
use latsum::LatticeSpec;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spec_strategy() -> impl Strategy<Value = LatticeSpec> {
    (-0.5f64..0.5, 0.5f64..2.5, 0.5f64..2.0).prop_map(|(x, y, a)| LatticeSpec::new(c(x, y), a).unwrap())
}

#[test]
fn first_shells() {
    let hex = LatticeSpec::new(Complex64::from_polar(1.0, PI / 3.0), 1.0).unwrap();
    let pts = direct_points(&hex, 1.05);
    assert_eq!(pts.len(), 6);
    assert!(pts.iter().all(|p| (p.r - 1.0).abs() < 1e-15));

    let rect = LatticeSpec::new(c(0.0, 2.0), 1.0).unwrap();
    let brute = (-3i64..=3)
        .flat_map(|p1| (-2i64..=2).map(move |p2| (p1, p2)))
        .filter(|&(p1, p2)| (p1, p2) != (0, 0) && ((p1 * p1 + 4 * p2 * p2) as f64).sqrt() <= 2.5)
        .count();
    assert_eq!(direct_points(&rect, 2.5).len(), brute);
}

#[test]
fn shortest_reciprocal_vectors() {
    for a in [1.0, 2.3] {
        let sq = LatticeSpec::new(c(0.0, 1.0), a).unwrap();
        let r = reciprocal_points(&sq, 10.0 / a)[0].r;
        assert!((r - 2.0 * PI / a).abs() < 1e-13);
        let hex = LatticeSpec::new(Complex64::from_polar(1.0, PI / 3.0), a).unwrap();
        let r = reciprocal_points(&hex, 10.0 / a)[0].r;
        assert!((r - 4.0 * PI / (3f64.sqrt() * a)).abs() < 1e-13);
    }
}

#[test]
fn eisenstein_rows() {
    let spec = LatticeSpec::new(c(0.0, 1.0), 1.0).unwrap();
    assert_eq!(eisenstein_ordered_rows(&spec, 1, 0).count(), 2);
    assert_eq!(eisenstein_ordered_rows(&spec, 2, 1).count(), 14);
}

#[test]
fn reduction_examples() {
    let r = reduce_tau(c(0.0, 1.0)).unwrap();
    assert_eq!(r.moves, vec![]);
    let r = reduce_tau(c(1.0, 3f64.sqrt())).unwrap();
    assert_eq!(r.moves, vec![TauMove::T(-1)]);
    assert!((r.tau - c(0.0, 3f64.sqrt())).norm() < 1e-15);
    let r = reduce_tau(c(0.0, 0.5)).unwrap();
    assert_eq!(r.moves, vec![TauMove::S]);
    assert!((r.tau - c(0.0, 2.0)).norm() < 1e-15);
    assert!(reduce_tau(c(0.3, -1.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduction_lands_in_fundamental_domain(x in -20.0f64..20.0, y in 0.02f64..5.0) {
        let r = reduce_tau(c(x, y)).unwrap();
        prop_assert!(r.tau.re.abs() <= 0.5 + 1e-12);
        prop_assert!(r.tau.norm() >= 1.0 - 1e-12);
        prop_assert!(r.tau.im >= 3f64.sqrt() / 2.0 - 1e-12);
        let end = *r.path(c(x, y)).last().unwrap();
        prop_assert!((end - r.tau).norm() < 1e-12);
    }

    #[test]
    fn streams_are_centrosymmetric(spec in spec_strategy()) {
        let pts = direct_points(&spec, 6.0 * spec.a());
        for p in &pts {
            prop_assert!(pts.iter().any(|q| (q.z() + p.z()).norm() < 1e-12));
        }
    }

    #[test]
    fn reciprocal_duality(spec in spec_strategy()) {
        let direct = direct_points(&spec, 6.0 * spec.a());
        let recip = reciprocal_points(&spec, 30.0 / spec.a());
        for r in direct.iter().step_by(direct.len() / 20 + 1).take(20) {
            for k in recip.iter().take(50) {
                let phase = k.x * r.x + k.y * r.y;
                let w = Complex64::from_polar(1.0, phase);
                prop_assert!((w - 1.0).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn counts_invariant_under_equivalence(spec in spec_strategy(), shift in -3i64..=3) {
        // Ω(τ + k) and Ω(−1/τ)·|τ| are the same point set as Ω(τ)
        let radius = 5.37 * spec.a();
        let n0 = direct_points(&spec, radius).len();
        let t = LatticeSpec::new(spec.tau() + shift as f64, spec.a()).unwrap();
        prop_assert_eq!(direct_points(&t, radius).len(), n0);
        let s = LatticeSpec::new(-spec.tau().inv(), spec.a() * spec.tau().norm()).unwrap();
        prop_assert_eq!(direct_points(&s, radius).len(), n0);
    }
}
