//! Conventional Eisenstein series Gₙ(τ), their τ-derivatives, and the
//! generalized series σₙ⁽ᵐ⁾(τ) = Σ′ e^{−imφ}/Rⁿ for even orders, evaluated
//! from q-expansions at the reduced τ and transformed back.

mod closed_form;
mod ring;

pub use closed_form::{base_values, sigma_exact, sigma_exact_at, ClosedForm, ExactSigma, MonoKey};
pub use ring::{
    g_deriv_poly, g_poly, poly_eval, ramanujan_ring_deriv, ring_derivative, sigma_poly, G_recursive, Poly,
};

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{reduce_tau, CanonicalLattice, TauMove};
use crate::special::{binomial, dirichlet_beta, dirichlet_g, factorial, zeta};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Longest q-series the engine will sum before giving up.
pub const MAX_SERIES_TERMS: u64 = 100_000;
/// Every q-series takes at least this many terms.
pub const MIN_SERIES_TERMS: u64 = 8;

/// σₙ⁽ᵐ⁾ for odd n or odd m over any Bravais lattice: the terms at ±p cancel.
pub const ODD_ORDER_SIGMA: Complex64 = Complex64::new(0.0, 0.0);

/// Exact σ̂ₖ(r) = Σ_{d|r} dᵏ with checked 128-bit arithmetic.
pub fn divisor_sigma(k: u32, r: u64) -> Result<u128> {
    if r == 0 {
        return Err(Error::InvalidArgument("divisor_sigma needs r >= 1".into()));
    }
    let overflow = || Error::Overflow(format!("sigma_{k}({r}) exceeds 128 bits"));
    let pow = |d: u64| (d as u128).checked_pow(k).ok_or_else(overflow);
    let mut acc: u128 = 0;
    let mut d = 1u64;
    while d * d <= r {
        if r.is_multiple_of(d) {
            acc = acc.checked_add(pow(d)?).ok_or_else(overflow)?;
            let e = r / d;
            if e != d {
                acc = acc.checked_add(pow(e)?).ok_or_else(overflow)?;
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// σ̂ₖ(r) in floating point, for the series engines.
pub fn divisor_sigma_f64(k: u32, r: u64) -> f64 {
    let kf = k as i32;
    let mut acc = 0.0;
    let mut d = 1u64;
    while d * d <= r {
        if r.is_multiple_of(d) {
            acc += (d as f64).powi(kf);
            let e = r / d;
            if e != d {
                acc += (e as f64).powi(kf);
            }
        }
        d += 1;
    }
    acc
}

/// Memoized exact σ̂ₖ(r) for 0 ≤ k ≤ k_max, 1 ≤ r ≤ r_max, filled by a sieve.
#[derive(Debug, Clone)]
pub struct DivisorCache {
    r_max: u64,
    table: Vec<Vec<u128>>,
}

impl DivisorCache {
    pub fn new(k_max: u32, r_max: u64) -> Result<Self> {
        let len = r_max as usize + 1;
        let mut table = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let mut row = vec![0u128; len];
            for d in 1..=r_max {
                let dk = (d as u128)
                    .checked_pow(k)
                    .ok_or_else(|| Error::Overflow(format!("{d}^{k} exceeds 128 bits")))?;
                let mut multiple = d;
                while multiple <= r_max {
                    let slot = &mut row[multiple as usize];
                    *slot = slot
                        .checked_add(dk)
                        .ok_or_else(|| Error::Overflow(format!("sigma_{k}({multiple}) exceeds 128 bits")))?;
                    multiple += d;
                }
            }
            table.push(row);
        }
        Ok(Self { r_max, table })
    }

    pub fn get(&self, k: u32, r: u64) -> Option<u128> {
        if r == 0 || r > self.r_max {
            return None;
        }
        self.table.get(k as usize).map(|row| row[r as usize])
    }

    pub fn k_max(&self) -> u32 {
        self.table.len() as u32 - 1
    }

    pub fn r_max(&self) -> u64 {
        self.r_max
    }
}

/// How a σ value is to be understood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convergence {
    Absolute,
    /// Conditionally convergent n = 2 sum in Eisenstein order, extraordinary term included.
    EisensteinOrder,
    Regularized,
    Divergent,
}

impl Convergence {
    pub fn name(self) -> &'static str {
        match self {
            Convergence::Absolute => "absolute",
            Convergence::EisensteinOrder => "eisenstein_order",
            Convergence::Regularized => "regularized",
            Convergence::Divergent => "divergent",
        }
    }
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaValue {
    pub value: Complex64,
    pub n: u32,
    pub m: u32,
    pub tau: Complex64,
    pub convergence: Convergence,
}

/// Output of [`regularize`]; `warning` is set when the call was a no-op.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularized {
    pub value: SigmaValue,
    pub warning: Option<String>,
}

fn check_even(name: &str, v: u32, min: u32) -> Result<()> {
    if !v.is_multiple_of(2) || v < min {
        return Err(Error::InvalidOrder(format!("{name} = {v} must be even and >= {min}")));
    }
    Ok(())
}

/// Order validation shared by every σ entry point.
pub fn validate_orders(n: u32, m: u32) -> Result<()> {
    check_even("n", n, 2)?;
    check_even("m", m, 0)?;
    if n == 2 && m == 0 {
        return Err(Error::Divergent("sigma_2^(0) diverges for every lattice".into()));
    }
    Ok(())
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::InvalidTau(tau));
    }
    Ok(())
}

/// The extraordinary constant 2π/(m Im τ) carried by Eisenstein-order σ₂⁽ᵐ⁾.
pub fn extraordinary(m: u32, tau: Complex64) -> f64 {
    2.0 * PI / (m as f64 * tau.im)
}

fn fact_f64(n: u32) -> f64 {
    factorial(n).to_f64().unwrap_or(f64::INFINITY)
}

fn big_f64(b: BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::INFINITY)
}

/// Σ_{r≥1} r^p σ̂_d(r) q^r for d ≥ 1.
///
/// Stops once the geometric bound on the remainder, built from
/// σ̂_d(r) ≤ ζ(d) r^d (d ≥ 2) or r(1 + ln r) (d = 1), drops below
/// 10⁻¹⁷·max(|partial|, floor).
pub(crate) fn q_series(q: Complex64, d: u32, p: i32, floor: f64) -> Result<Complex64> {
    let aq = q.norm();
    if aq >= 1.0 {
        return Err(Error::NoConvergence(format!("|q| = {aq} >= 1")));
    }
    let c_d = if d >= 2 { zeta(d) } else { 1.0 };
    let growth = (p + d as i32).max(0) as f64;
    let envelope = |r: f64| {
        let c = if d >= 2 { c_d } else { 1.0 + r.ln() };
        ((p + d as i32) as f64 * r.ln() + r * aq.ln()).exp() * c
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qr = Complex64::new(1.0, 0.0);
    for r in 1..=MAX_SERIES_TERMS {
        qr *= q;
        acc += qr * ((r as f64).powi(p) * divisor_sigma_f64(d, r));
        if aq == 0.0 {
            return Ok(acc);
        }
        if r >= MIN_SERIES_TERMS {
            let next = (r + 1) as f64;
            let mut ratio = ((next + 1.0) / next).powf(growth) * aq;
            if d == 1 {
                ratio *= (1.0 + (next + 1.0).ln()) / (1.0 + next.ln());
            }
            if ratio < 1.0 {
                let tail = envelope(next) / (1.0 - ratio);
                if tail < 1e-17 * acc.norm().max(floor) {
                    return Ok(acc);
                }
            }
        }
    }
    Err(Error::NoConvergence(format!("q-series with |q| = {aq} needs more than {MAX_SERIES_TERMS} terms")))
}

fn nome(tau: Complex64) -> Complex64 {
    (2.0 * PI * I * tau).exp()
}

/// ∂ᵏGₙ/∂τᵏ straight from the Fourier series at τ (no reduction).
#[allow(non_snake_case)]
pub fn G_deriv(n: u32, k: u32, tau: Complex64) -> Result<Complex64> {
    check_even("n", n, 2)?;
    check_tau(tau)?;
    let pref = 2.0 * (2.0 * PI * I).powu(n + k) / fact_f64(n - 1);
    let constant = if k == 0 { 2.0 * zeta(n) } else { 0.0 };
    let floor = constant / pref.norm();
    let s = q_series(nome(tau), n - 1, k as i32, floor)?;
    Ok(pref * s + constant)
}

/// Gₙ(τ) evaluated at the reduced τ and transformed back; for n = 2 this is
/// the Fourier (Eisenstein-order) value.
#[allow(non_snake_case)]
pub fn G(n: u32, tau: Complex64) -> Result<Complex64> {
    check_even("n", n, 2)?;
    Ok(sigma(n, n, tau)?.value)
}

/// σₙ⁽ᵐ⁾(τ) from the series at τ itself, without reduction; the value is
/// Eisenstein-order for n = 2.
pub fn sigma_series(n: u32, m: u32, tau: Complex64) -> Result<Complex64> {
    validate_orders(n, m)?;
    check_tau(tau)?;
    if m >= n {
        sigma_from_derivatives(n, m, tau)
    } else {
        sigma_below_diagonal(n, m, tau)
    }
}

fn sigma_from_derivatives(n: u32, m: u32, tau: Complex64) -> Result<Complex64> {
    let half = ((m - n) / 2) as i64;
    let two_i_im = Complex64::new(0.0, 2.0 * tau.im);
    let nf = fact_f64(n - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=half as u32 {
        let c = big_f64(binomial(half, k as i64)) * nf / fact_f64(n + k - 1);
        acc += two_i_im.powu(k) * c * G_deriv(n, k, tau)?;
    }
    Ok(acc)
}

/// The m < n branch: constant, ζ(n−1) mid-term and the two finite sums of
/// q- and q̄-series with negative powers of r.
fn sigma_below_diagonal(n: u32, m: u32, tau: Complex64) -> Result<Complex64> {
    let alpha = (n + m) / 2;
    let beta = (n - m) / 2;
    let im = tau.im;
    let sign = if (m / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let constant = 2.0 * zeta(n);
    let mid = big_f64(binomial(n as i64 - 2, alpha as i64 - 1)) * sign * PI / (2f64.powi(n as i32 - 3) * im.powi(n as i32 - 1))
        * zeta(n - 1);
    let q = nome(tau);
    let mut acc = Complex64::new(constant + mid, 0.0);
    for k in 0..alpha {
        let pref = sign * PI.powi((alpha - k) as i32) / (2f64.powi(2 * k as i32 - m as i32 - 1) * im.powi((beta + k) as i32))
            * big_f64(binomial((beta + k) as i64 - 1, k as i64))
            / fact_f64(alpha - k - 1);
        let s = q_series(q, n - 1, -((beta + k) as i32), constant / pref.abs())?;
        acc += pref * s;
    }
    for k in 0..beta {
        let pref = sign * PI.powi((beta - k) as i32) / (2f64.powi(2 * k as i32 + m as i32 - 1) * im.powi((alpha + k) as i32))
            * big_f64(binomial((alpha + k) as i64 - 1, k as i64))
            / fact_f64(beta - k - 1);
        let s = q_series(q.conj(), n - 1, -((alpha + k) as i32), constant / pref.abs())?;
        acc += pref * s;
    }
    Ok(acc)
}

/// σₙ⁽ᵐ⁾(τ): the series is summed at the reduced τ′ and carried back along
/// the reduction path. For n = 2 the regularized part is transported with
/// the geometric law and the extraordinary term of the original τ re-added.
pub fn sigma(n: u32, m: u32, tau: Complex64) -> Result<SigmaValue> {
    validate_orders(n, m)?;
    check_tau(tau)?;
    let red = reduce_tau(tau)?;
    let path = red.path(tau);
    let mut v = sigma_series(n, m, red.tau)?;
    if n == 2 {
        v -= extraordinary(m, red.tau);
    }
    for (j, mv) in red.moves.iter().enumerate().rev() {
        if let TauMove::S = mv {
            let t = path[j];
            v *= t.norm().powi(m as i32 - n as i32) / t.powu(m);
        }
    }
    let convergence = if n == 2 {
        v += extraordinary(m, tau);
        Convergence::EisensteinOrder
    } else {
        Convergence::Absolute
    };
    Ok(SigmaValue { value: v, n, m, tau, convergence })
}

/// Strip the extraordinary contribution from an Eisenstein-order σ₂⁽ᵐ⁾.
pub fn regularize(v: SigmaValue) -> Regularized {
    match v.convergence {
        Convergence::EisensteinOrder => Regularized {
            value: SigmaValue { value: v.value - extraordinary(v.m, v.tau), convergence: Convergence::Regularized, ..v },
            warning: None,
        },
        Convergence::Regularized => Regularized { value: v, warning: None },
        Convergence::Absolute => Regularized {
            value: v,
            warning: Some(format!("sigma_{}^({}) is absolutely convergent; nothing to regularize", v.n, v.m)),
        },
        Convergence::Divergent => Regularized {
            value: v,
            warning: Some("divergent sum cannot be regularized by subtraction".into()),
        },
    }
}

/// The same lattice sum at −1/τ.
pub fn transform_tau_inverse(v: SigmaValue) -> Result<SigmaValue> {
    let tau = v.tau;
    let new_tau = -tau.inv();
    let geometric = tau.powu(v.m) / tau.norm().powi(v.m as i32 - v.n as i32);
    let value = match v.convergence {
        Convergence::Divergent => return Err(Error::Divergent("cannot transform a divergent sum".into())),
        Convergence::Absolute | Convergence::Regularized => geometric * v.value,
        Convergence::EisensteinOrder => {
            let e = extraordinary(v.m, tau);
            let bracket = 1.0 - tau.norm().powi(v.m as i32) / tau.powu(v.m);
            geometric * (v.value - e * bracket)
        }
    };
    Ok(SigmaValue { value, tau: new_tau, ..v })
}

/// σ₂⁽ᵐ⁾ regularized, or σₙ⁽ᵐ⁾ for n ≥ 4.
pub fn sigma_regularized(n: u32, m: u32, tau: Complex64) -> Result<Complex64> {
    Ok(regularize(sigma(n, m, tau)?).value.value)
}

/// σ_{2s}⁽⁰⁾ at a canonical lattice from the Dirichlet L-series closed forms.
pub fn sigma_zero_dirichlet(s: u32, lattice: CanonicalLattice) -> Result<f64> {
    if s < 2 {
        return Err(Error::Divergent(format!("sigma_{}^(0) needs s >= 2", 2 * s)));
    }
    let sf = s as f64;
    let z = zeta(s);
    Ok(match lattice {
        CanonicalLattice::Square => 4.0 * z * dirichlet_beta(s),
        CanonicalLattice::Rect2 => 2.0 * (1.0 - 2f64.powf(-sf) + 2f64.powf(1.0 - 2.0 * sf)) * z * dirichlet_beta(s),
        CanonicalLattice::Hexagonal => 6.0 * z * dirichlet_g(s),
        CanonicalLattice::RectSqrt3 => 2.0 * (1.0 + 2f64.powf(1.0 - 2.0 * sf)) * z * dirichlet_g(s),
    })
}
