//! Exact polynomial algebra in (G₂, G₄, G₆): the Eisenstein recursion for
//! G_{2k} and Ramanujan's derivative identities, with D̃ = iπ·d/dτ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::G;
use crate::error::{Error, Result};
use crate::special::{binomial, factorial, rational, to_f64};

/// Σ c·G₂^a G₄^b G₆^c keyed by (a, b, c).
pub type Poly = BTreeMap<(u32, u32, u32), BigRational>;

fn add_term(p: &mut Poly, key: (u32, u32, u32), c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(key).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&key);
    }
}

fn monomial(key: (u32, u32, u32)) -> Poly {
    let mut p = Poly::new();
    p.insert(key, BigRational::one());
    p
}

fn mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(a1, b1, c1), u) in x {
        for (&(a2, b2, c2), v) in y {
            add_term(&mut out, (a1 + a2, b1 + b2, c1 + c2), u * v);
        }
    }
    out
}

/// D̃ applied to a polynomial using
/// D̃G₂ = (5G₄ − G₂²)/2, D̃G₄ = 7G₆ − 2G₂G₄, D̃G₆ = (30G₄² − 21G₂G₆)/7.
pub fn ring_derivative(p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(a, b, c), cf) in p {
        if a > 0 {
            let af = BigRational::from_integer(BigInt::from(a));
            add_term(&mut out, (a - 1, b + 1, c), cf * &af * rational(5, 2));
            add_term(&mut out, (a + 1, b, c), -(cf * &af * rational(1, 2)));
        }
        if b > 0 {
            let bf = BigRational::from_integer(BigInt::from(b));
            add_term(&mut out, (a, b - 1, c + 1), cf * &bf * rational(7, 1));
            add_term(&mut out, (a + 1, b, c), -(cf * &bf * rational(2, 1)));
        }
        if c > 0 {
            let cc = BigRational::from_integer(BigInt::from(c));
            add_term(&mut out, (a, b + 2, c - 1), cf * &cc * rational(30, 7));
            add_term(&mut out, (a + 1, b, c), -(cf * &cc * rational(3, 1)));
        }
    }
    out
}

/// Gₙ as a polynomial in G₂, G₄, G₆ (n even ≥ 2).
pub fn g_poly(n: u32) -> Result<Poly> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(Error::InvalidOrder(format!("n = {n} must be even and >= 2")));
    }
    match n {
        2 => return Ok(monomial((1, 0, 0))),
        4 => return Ok(monomial((0, 1, 0))),
        6 => return Ok(monomial((0, 0, 1))),
        _ => {}
    }
    let k_max = (n / 2) as i64;
    // table[k] holds G_{2k}
    let mut table: Vec<Poly> = vec![Poly::new(); k_max as usize + 1];
    table[2] = monomial((0, 1, 0));
    table[3] = monomial((0, 0, 1));
    for k in 4..=k_max {
        let mut acc = Poly::new();
        for s in 2..=k - 2 {
            let w = BigRational::from_integer(BigInt::from((2 * s - 1) * (2 * k - 2 * s - 1)));
            for (key, v) in mul(&table[s as usize], &table[(k - s) as usize]) {
                add_term(&mut acc, key, v * &w);
            }
        }
        let pre = rational(3, (2 * k + 1) * (2 * k - 1) * (k - 3));
        table[k as usize] = acc.into_iter().map(|(key, v)| (key, v * &pre)).collect();
    }
    Ok(table.pop().expect("non-empty"))
}

/// D̃ᵏGₙ = (iπ)ᵏ ∂ᵏGₙ/∂τᵏ as a polynomial.
pub fn g_deriv_poly(n: u32, k: u32) -> Result<Poly> {
    let mut p = g_poly(n)?;
    for _ in 0..k {
        p = ring_derivative(&p);
    }
    Ok(p)
}

/// σₙ⁽ᵐ⁾ (m ≥ n) as Σₖ cₖ·(2 Im τ/π)ᵏ·D̃ᵏGₙ; returns (k, cₖ, D̃ᵏGₙ).
pub fn sigma_poly(n: u32, m: u32) -> Result<Vec<(u32, BigRational, Poly)>> {
    if m < n || !m.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!("closed-form route needs even m >= n, got (n, m) = ({n}, {m})")));
    }
    let half = (m - n) / 2;
    let mut out = Vec::new();
    let mut p = g_poly(n)?;
    for k in 0..=half {
        let c = BigRational::new(binomial(half as i64, k as i64) * factorial(n - 1), factorial(n + k - 1));
        out.push((k, c, p.clone()));
        p = ring_derivative(&p);
    }
    Ok(out)
}

pub fn poly_eval(p: &Poly, g: [Complex64; 3]) -> Complex64 {
    p.iter()
        .map(|(&(a, b, c), cf)| to_f64(cf) * g[0].powu(a) * g[1].powu(b) * g[2].powu(c))
        .sum()
}

/// τ-derivatives of order 0..=order of (G₂, G₄, G₆) from their values at a common τ.
pub fn ramanujan_ring_deriv(values: [Complex64; 3], order: u32) -> Vec<[Complex64; 3]> {
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    let mut polys = [monomial((1, 0, 0)), monomial((0, 1, 0)), monomial((0, 0, 1))];
    let mut out = Vec::with_capacity(order as usize + 1);
    for j in 0..=order {
        let scale = ipi.powu(j).inv();
        out.push([0, 1, 2].map(|i| poly_eval(&polys[i], values) * scale));
        polys = polys.map(|p| ring_derivative(&p));
    }
    out
}

/// G_{2k}(τ) for 2k ≥ 8 from G₄ and G₆ via the Eisenstein recursion.
#[allow(non_snake_case)]
pub fn G_recursive(n: u32, tau: Complex64) -> Result<Complex64> {
    if !n.is_multiple_of(2) || n < 8 {
        return Err(Error::InvalidArgument(format!("G_recursive needs even n >= 8 (got {n}); call G directly")));
    }
    let k_max = (n / 2) as usize;
    let mut g = vec![Complex64::new(0.0, 0.0); k_max + 1];
    g[2] = G(4, tau)?;
    g[3] = G(6, tau)?;
    for k in 4..=k_max {
        let ki = k as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 2..=ki - 2 {
            acc += ((2 * s - 1) * (2 * ki - 2 * s - 1)) as f64 * g[s as usize] * g[(ki - s) as usize];
        }
        g[k] = acc * (3.0 / ((2 * ki + 1) * (2 * ki - 1) * (ki - 3)) as f64);
    }
    Ok(g[k_max])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::G_deriv;

    #[test]
    fn low_order_recursions() {
        assert_eq!(g_poly(8).unwrap(), BTreeMap::from([((0, 2, 0), rational(3, 7))]));
        assert_eq!(g_poly(10).unwrap(), BTreeMap::from([((0, 1, 1), rational(5, 11))]));
        assert_eq!(
            g_poly(12).unwrap(),
            BTreeMap::from([((0, 3, 0), rational(18, 143)), ((0, 0, 2), rational(25, 143))])
        );
    }

    #[test]
    fn recursive_matches_fourier() {
        let tau = Complex64::new(0.1, 1.2);
        let a = G_recursive(12, tau).unwrap();
        let b = G(12, tau).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
        assert!(G_recursive(6, tau).is_err());
        let hex = crate::lattice::CanonicalLattice::Hexagonal.tau();
        assert!(G_recursive(10, hex).unwrap().norm() < 1e-12);
    }

    #[test]
    fn second_derivatives_from_ring() {
        let tau = Complex64::new(-0.2, 1.05);
        let vals = [G(2, tau).unwrap(), G(4, tau).unwrap(), G(6, tau).unwrap()];
        let d = ramanujan_ring_deriv(vals, 2);
        for (i, n) in [2u32, 4, 6].into_iter().enumerate() {
            let fourier = G_deriv(n, 2, tau).unwrap();
            assert!((d[2][i] - fourier).norm() < 1e-10 * fourier.norm(), "n = {n}");
        }
        assert_eq!(d[0], vals);
    }
}
