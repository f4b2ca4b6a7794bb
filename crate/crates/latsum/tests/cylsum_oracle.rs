//! Closed-form cylindrical sums against truncated reciprocal-lattice sums.

use std::f64::consts::PI;

use latsum::cylsum::{coeffs, evaluate, recur_apply, Atom, Recurrence, S};
use latsum::eisenstein::extraordinary;
use latsum::oracle::{PointStream, S_direct};
use latsum::special::{rational, to_f64};
use latsum::LatticeSpec;
use num_complex::Complex64;

const CASES: [(u32, i32, u32); 7] = [(2, 0, 2), (1, 0, 5), (2, 2, 2), (2, 4, 2), (1, 4, 3), (2, 4, 4), (2, 6, 2)];

fn specs() -> Vec<LatticeSpec> {
    [Complex64::new(0.0, 1.0), Complex64::from_polar(1.0, PI / 3.0), Complex64::new(0.0, 2.0), Complex64::new(0.3, 1.2)]
        .into_iter()
        .map(|t| LatticeSpec::new(t, 1.0).unwrap())
        .collect()
}

#[test]
fn reference_cases_within_oracle_tail() {
    for spec in specs() {
        let stream = PointStream::reciprocal(&spec, 400.0 * PI);
        for (l, m, n) in CASES {
            let expr = S(l, m, n, &spec).unwrap();
            for f in [0.05, 0.1, 0.2] {
                let u = f * spec.a();
                let closed = evaluate(&expr, u).unwrap();
                let oracle = S_direct(&stream, l, m, n, u).unwrap();
                let err = (closed - oracle.value).norm();
                assert!(err <= oracle.tail_estimate, "{spec} ({l},{m},{n}) u={u}: err {err:e} tail {:e}", oracle.tail_estimate);
            }
        }
    }
}

#[test]
fn s202_is_exact() {
    for spec in specs() {
        let e = S(2, 0, 2, &spec).unwrap();
        let area = spec.unit_cell_area();
        for u in [0.05, 0.3, 1.0] {
            let v = evaluate(&e, u).unwrap();
            assert!((v - Complex64::new(area / (4.0 * PI) - u * u / 8.0, 0.0)).norm() < 1e-12);
        }
    }
    let e = S(2, 0, 2, &LatticeSpec::new(Complex64::i(), 2.0).unwrap()).unwrap();
    assert!((evaluate(&e, 1.0).unwrap().re - (1.0 / PI - 0.125)).abs() < 1e-15);
}

#[test]
fn s042_against_direct_sum() {
    let spec = LatticeSpec::new(Complex64::new(0.0, 1.0), 1.0).unwrap();
    let e = S(4, 0, 2, &spec).unwrap();
    assert_eq!(e.terms.len(), 1);
    let b = coeffs(4, 0, 2).unwrap().b_l.unwrap();
    assert!((e.coefficient(0, false).re - spec.unit_cell_area() / (2.0 * PI) * to_f64(&b)).abs() < 1e-15);
    let oracle = S_direct(&PointStream::reciprocal(&spec, 400.0 * PI), 4, 0, 2, 0.05).unwrap();
    assert!((evaluate(&e, 0.05).unwrap() - oracle.value).norm() <= oracle.tail_estimate);
}

#[test]
fn reference_coefficients() {
    assert_eq!(coeffs(0, 0, 2).unwrap().c.iter().find(|(k, _)| *k == 0).unwrap().1, rational(-2, 1));
    assert_eq!(coeffs(1, 0, 5).unwrap().c_l, rational(-5, 4));
    let c22 = coeffs(2, 0, 2).unwrap();
    assert_eq!(c22.b_l, Some(rational(1, 2)));
    assert_eq!(c22.c.iter().find(|(k, _)| *k == 0).unwrap().1, rational(1, 1));
}

#[test]
fn recurrence_worked_examples() {
    let spec = LatticeSpec::new(Complex64::new(0.15, 1.1), 1.3).unwrap();
    let s242 = S(2, 4, 2, &spec).unwrap();
    let s143 = recur_apply(Recurrence::R4, &s242).unwrap();
    assert_eq!((s143.l, s143.n), (1, 3));
    assert_eq!(s143.formula(), S(1, 4, 3, &spec).unwrap().formula());
    let s244 = recur_apply(Recurrence::R3, &s143).unwrap();
    assert_eq!(s244.formula(), S(2, 4, 4, &spec).unwrap().formula());
    let back = recur_apply(Recurrence::R3, &recur_apply(Recurrence::R1, &s244).unwrap()).unwrap();
    for t in &s244.terms {
        assert!((back.coefficient(t.power, t.with_log) - t.coeff).norm() < 1e-14 * t.coeff.norm());
    }
}

#[test]
fn identically_zero_and_odd_orders() {
    let spec = LatticeSpec::new(Complex64::new(0.0, 1.0), 1.0).unwrap();
    assert!(S(2, 3, 2, &spec).unwrap().is_empty());
    // (l − n)/2 > m/2 − 1
    assert!(S(6, 2, 2, &spec).unwrap().is_empty());
    assert!(!S(2, 2, 2, &spec).unwrap().is_empty());
    assert!(S(2, 2, 3, &spec).is_err());
}

#[test]
fn extraordinary_sigma_breaks_agreement() {
    let spec = LatticeSpec::new(Complex64::new(0.3, 1.2), 1.0).unwrap();
    let stream = PointStream::reciprocal(&spec, 400.0 * PI);
    let (l, m, n) = (2u32, 4i32, 4u32);
    let expr = S(l, m, n, &spec).unwrap();
    let sym = expr.symbolic.as_ref().unwrap();
    let e = extraordinary(m as u32, spec.tau());
    let a2pi = spec.unit_cell_area() / (2.0 * PI);
    let u = 0.1f64;
    let mut shift = Complex64::new(0.0, 0.0);
    for (&(p, with_log), coeff) in &sym.terms {
        assert!(!with_log);
        for (k, c) in coeff {
            if let Atom::Sigma { n: 2, .. } = k.atom {
                shift += to_f64(c) * a2pi.powi(k.a_pow as i32) / spec.a().powi(k.scale_pow as i32) * e * u.powi(p);
            }
        }
    }
    let oracle = S_direct(&stream, l, m, n, u).unwrap();
    let reg = evaluate(&expr, u).unwrap();
    let tol = 1e-9;
    assert!((reg - oracle.value).norm() < tol);
    assert!((reg + shift - oracle.value).norm() > 10.0 * tol);
}

#[test]
fn scale_covariance() {
    // Ω̄(τ, 2a) = Ω̄(τ, a)/2, so S(2u; τ, 2a) = 2ⁿ S(u; τ, a)
    for spec in specs() {
        let big = spec.with_scale(2.0 * spec.a()).unwrap();
        for (l, m, n) in CASES {
            let small_e = S(l, m, n, &spec).unwrap();
            let big_e = S(l, m, n, &big).unwrap();
            for u in [0.07, 0.15] {
                let lhs = evaluate(&big_e, 2.0 * u).unwrap();
                let rhs = evaluate(&small_e, u).unwrap() * 2f64.powi(n as i32);
                assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "{spec} ({l},{m},{n})");
            }
        }
    }
}
