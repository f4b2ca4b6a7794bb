//! Multiset identities for displaced point sets and the worked closed forms
//! built on them.

use std::f64::consts::PI;

use latsum::cylsum::{evaluate, RadialExpression};
use latsum::displaced::{self, hex_m, hex_m_sublattice, sigma_over, square_m, square_wyckoff_d, DisplacedSet, S_over, BUILT_IN};
use latsum::modular::{gamma_quarter, gamma_third};
use latsum::oracle::{dirichlet_constants, sigma_direct, PointStream, S_direct};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn every_combination_reproduces_its_point_set() {
    for set in BUILT_IN {
        for a in [1.0, 2.5] {
            let (basis, _) = set.translates(a).unwrap();
            let radius = 10.0 * basis.shortest_vector();
            let comb = set.combination(a).unwrap();
            let got = comb.signed_multiset(&set.grid(a).unwrap(), radius).unwrap();
            let want = set.explicit_multiset(a, radius).unwrap();
            assert!(got.len() > 100, "{set:?}");
            assert_eq!(got, want, "{set:?} at a = {a}");
        }
    }
}

#[test]
fn m_sublattices_partition_hex_m() {
    let grid = DisplacedSet::HexM.grid(1.0).unwrap();
    let r = 40.0;
    let mut union = std::collections::BTreeMap::new();
    for j in 1..=3 {
        for (k, w) in hex_m_sublattice(j, 1.0).unwrap().signed_multiset(&grid, r).unwrap() {
            *union.entry(k).or_insert(0) += w;
        }
    }
    assert_eq!(union, hex_m(1.0).unwrap().signed_multiset(&grid, r).unwrap());
}

#[test]
fn square_gamma_of_double_period_is_the_union_of_gamma_x_y_m() {
    let grid = DisplacedSet::SquareM.grid(1.0).unwrap();
    let r = 30.0;
    let mut union = std::collections::BTreeMap::new();
    for set in [DisplacedSet::SquareGamma, DisplacedSet::SquareX, DisplacedSet::SquareY, DisplacedSet::SquareM] {
        for (k, w) in set.explicit_points(1.0, r).unwrap().into_iter().map(|p| grid.coordinates(p.z())).map(|(c1, c2)| ((c1.round() as i64, c2.round() as i64), 1)) {
            *union.entry(k).or_insert(0) += w;
        }
    }
    let double = DisplacedSet::SquareGamma.combination(2.0).unwrap().signed_multiset(&grid, r).unwrap();
    assert_eq!(union, double);
}

#[test]
fn wyckoff_d_closed_forms() {
    let g8 = gamma_quarter().powi(8);
    let c = square_wyckoff_d(1.0).unwrap();
    let s44 = sigma_over(&c, 4, 4, true).unwrap();
    assert!(rel(s44, Complex64::new(-g8 / (192.0 * PI * PI), 0.0)) < 1e-12, "{s44}");
    let s24 = sigma_over(&c, 2, 4, true).unwrap();
    assert!(rel(s24, Complex64::new(-g8 / (128.0 * PI.powi(3)), 0.0)) < 1e-12, "{s24}");
}

#[test]
fn wyckoff_d_sigma66_matches_direct_sum() {
    let c = square_wyckoff_d(1.0).unwrap();
    let closed = sigma_over(&c, 6, 6, true).unwrap();
    let pts = PointStream::displaced(DisplacedSet::WyckoffD, 1.0, 200.0).unwrap();
    let direct = sigma_direct(&pts, 6, 6);
    assert!(direct.tail_estimate < 1e-8);
    assert!((closed - direct.value).norm() < 1e-8, "{closed} vs {}", direct.value);
}

fn coeff(e: &RadialExpression, p: i32, log: bool) -> Complex64 {
    e.coefficient(p, log)
}

#[test]
fn square_m_s145_worked_example() {
    let g8 = gamma_quarter().powi(8);
    for a in [1.0, 1.7] {
        let e = S_over(&square_m(a).unwrap(), 1, 4, 5).unwrap();
        let want = [
            (1, -a.powi(4) / (3.0 * 2f64.powi(11) * PI.powi(6))),
            (3, a * a / (2f64.powi(13) * PI.powi(5))),
            (5, -1.0 / (9.0 * 2f64.powi(12) * PI.powi(4))),
            (7, 1.0 / (15.0 * 2f64.powi(15) * a * a * PI.powi(3))),
        ];
        assert_eq!(e.terms.len(), 4);
        for (p, c) in want {
            assert!(rel(coeff(&e, p, false), Complex64::new(g8 * c, 0.0)) < 1e-12, "u^{p} at a = {a}");
        }
    }
}

#[test]
fn square_m_s145_matches_direct_sum() {
    let e = S_over(&square_m(1.0).unwrap(), 1, 4, 5).unwrap();
    let pts = PointStream::displaced(DisplacedSet::SquareM, 1.0, 300.0 * PI).unwrap();
    let d = S_direct(&pts, 1, 4, 5, 0.2).unwrap();
    let c = evaluate(&e, 0.2).unwrap();
    assert!((c - d.value).norm() <= d.tail_estimate, "{c} vs {} (tail {})", d.value, d.tail_estimate);
}

#[test]
fn hex_m_s206_worked_example() {
    let g2 = dirichlet_constants(2).unwrap().g;
    let sq3 = 3f64.sqrt();
    for a in [1.0, 0.8] {
        let e = S_over(&hex_m(a).unwrap(), 2, 0, 6).unwrap();
        let u2 = 135.0 * a.powi(4) * g2 / (2048.0 * PI * PI);
        let u4_log = sq3 * a * a / (128.0 * PI);
        let u4 = -17.0 * a * a / (512.0 * sq3 * PI) - u4_log * (4.0 / 3.0) * 2f64.ln()
            + 3.0 * a * a / (128.0 * sq3 * PI) * (3f64.powf(0.25) * gamma_third().powi(3) / (2.0 * PI * a)).ln();
        assert_eq!(e.terms.len(), 3);
        assert!(rel(coeff(&e, 2, false), Complex64::new(u2, 0.0)) < 1e-12);
        assert!(rel(coeff(&e, 4, true), Complex64::new(u4_log, 0.0)) < 1e-12);
        assert!(rel(coeff(&e, 4, false), Complex64::new(u4, 0.0)) < 1e-12);
    }
}

#[test]
fn hex_m_sixfold_order_splits_evenly() {
    for (l, n) in [(2, 2), (0, 4), (2, 6)] {
        let whole = S_over(&hex_m(1.0).unwrap(), l, 6, n).unwrap();
        for j in 1..=3 {
            let part = S_over(&hex_m_sublattice(j, 1.0).unwrap(), l, 6, n).unwrap();
            for u in [0.1, 0.3] {
                let (w, p) = (evaluate(&whole, u).unwrap(), evaluate(&part, u).unwrap());
                assert!((w - 3.0 * p).norm() < 1e-13 * w.norm().max(1e-3), "({l},6,{n}) M{j}");
            }
        }
    }
}

#[test]
fn square_x_two_fold_order_matches_direct_sum() {
    let e = S_over(&displaced::square_x(1.0).unwrap(), 2, 2, 4).unwrap();
    let pts = PointStream::displaced(DisplacedSet::SquareX, 1.0, 300.0 * PI).unwrap();
    let d = S_direct(&pts, 2, 2, 4, 0.15).unwrap();
    assert!(e.coefficient(4, false).norm() > 1e-6, "X set is only two-fold symmetric");
    assert!((evaluate(&e, 0.15).unwrap() - d.value).norm() <= d.tail_estimate);
}

#[test]
fn odd_m_and_unsupported_sets() {
    let e = S_over(&square_m(1.0).unwrap(), 2, 3, 2).unwrap();
    assert!(e.is_empty());
    assert!(S_over(&square_m(1.0).unwrap(), 2, 4, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn s_over_is_linear(j in 0usize..4, k in 0usize..4, m in prop::sample::select(vec![0, 2, 4, 6]), ln in 0usize..3, a in 0.5f64..2.0) {
        let sets = [DisplacedSet::SquareX, DisplacedSet::SquareY, DisplacedSet::SquareM, DisplacedSet::SquareGamma];
        let (l, n) = [(2, 2), (1, 3), (2, 4)][ln];
        let c1 = sets[j].combination(a).unwrap();
        let c2 = sets[k].combination(a).unwrap();
        let sum = S_over(&c1.concat(&c2).unwrap(), l, m, n).unwrap();
        let (s1, s2) = (S_over(&c1, l, m, n).unwrap(), S_over(&c2, l, m, n).unwrap());
        let combined = c1.concat(&c2).unwrap();
        for t in &sum.terms {
            let want = s1.coefficient(t.power, t.with_log) + s2.coefficient(t.power, t.with_log);
            // rounding is relative to the largest single-lattice contribution
            let scale: f64 = combined
                .terms
                .iter()
                .map(|c| latsum::cylsum::S(l, m, n, &c.spec).unwrap().coefficient(t.power, t.with_log).norm())
                .sum();
            prop_assert!((t.coeff - want).norm() <= 1e-14 * scale);
        }
    }
}
