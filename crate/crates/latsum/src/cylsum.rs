//! Cylindrical harmonic sums S_{l,m,n}(u; τ, a) = Σ′ J_l(K u) e^{imψ}/Kⁿ
//! over the reciprocal lattice, for even l − n, as finite sums of c·uᵖ and
//! c·uᵖ log u.
//!
//! Coefficients are first assembled symbolically. A [`SymPart`] is an exact
//! rational times (A/2π)^a_pow · a^{−scale_pow} times one atom: 1, the
//! constant log(2π|η(τ)|²/a), or `s(n,m)`. The atom `s(n,m)` stands for the
//! reciprocal-orientation sum Σ′_{Ω(τ,1)} e^{+imφ}/Rⁿ, i.e. the complex
//! conjugate of σₙ⁽ᵐ⁾(τ), taken regularized when n = 2.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eisenstein::{sigma_regularized, sigma_zero_dirichlet};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::modular::eta_value;
use crate::special::{factorial, harmonic, to_f64};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::from(2).pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2).pow((-e) as u32))
    }
}

fn sign(e: i64) -> BigRational {
    if e.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// n! as a rational, or None for negative n (the Γ pole convention).
fn fact(n: i64) -> Option<BigRational> {
    (n >= 0).then(|| BigRational::from_integer(factorial(n as u32)))
}

fn check_parity(l: u32, n: u32) -> Result<()> {
    if (l as i64 - n as i64) % 2 != 0 {
        return Err(Error::InvalidOrder(format!("l - n = {} is odd; only even l - n has a closed form", l as i64 - n as i64)));
    }
    Ok(())
}

/// B_{2k}(l, n); zero whenever a factorial argument is negative.
pub fn b_coeff(k: i64, l: u32, n: u32) -> BigRational {
    let (l, n) = (l as i64, n as i64);
    match (fact((n + l) / 2 - k), fact((n - l) / 2 - k)) {
        (Some(f1), Some(f2)) => sign(k) * sign((n - l) / 2) * pow2(2 * k - n) / (f1 * f2),
        _ => BigRational::zero(),
    }
}

/// C_{2k}(l, n); zero whenever a factorial argument is negative.
pub fn c_coeff(k: i64, l: u32, n: u32) -> BigRational {
    let (l, n) = (l as i64, n as i64);
    if k < 0 {
        return BigRational::zero();
    }
    match (fact((n + l) / 2 + k), fact((n - l) / 2 + k)) {
        (Some(f1), Some(f2)) => {
            sign((n - l) / 2) * pow2(2 - n) * fact(k).unwrap() * fact(k + 2).unwrap() / (f1 * f2)
        }
        _ => BigRational::zero(),
    }
}

/// D_k(m) for m even ≥ 2, 0 ≤ k ≤ m/2 − 1.
pub fn d_coeff(k: i64, m: u32) -> BigRational {
    let h = (m / 2) as i64;
    match (fact(h + k), fact(k), fact(h - k - 1)) {
        (Some(a), Some(b), Some(c)) => sign(k) * a / (b * fact(k + 2).unwrap() * c),
        _ => BigRational::zero(),
    }
}

/// B_l(l, n), defined for l ≥ n.
pub fn b_l(l: u32, n: u32) -> Option<BigRational> {
    let (l, n) = (l as i64, n as i64);
    Some(fact((l - n) / 2)? / (pow2(n - 1) * fact((l + n) / 2 - 1)?))
}

/// C_l(l, n) = −½[H((n+l)/2 − 1) + H((n−l)/2 − 1)].
pub fn c_l(l: u32, n: u32) -> BigRational {
    let (l, n) = (l as i64, n as i64);
    -(harmonic((n + l) / 2 - 1) + harmonic((n - l) / 2 - 1)) / int(2)
}

/// All coefficients that enter S_{l,m,n}.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub l: u32,
    pub m: u32,
    pub n: u32,
    /// (k, B_{2k}) for 1 ≤ k ≤ (n − l)/2
    pub b: Vec<(i64, BigRational)>,
    /// (k, C_{2k}) for the k entering the second sum (k = 0 only when m = 0)
    pub c: Vec<(i64, BigRational)>,
    /// (k, D_k(m)) for 0 ≤ k ≤ m/2 − 1
    pub d: Vec<(i64, BigRational)>,
    pub b_l: Option<BigRational>,
    pub c_l: BigRational,
}

pub fn coeffs(l: u32, m: u32, n: u32) -> Result<CoefficientSet> {
    check_parity(l, n)?;
    if !m.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!("m = {m} must be even")));
    }
    let (li, ni) = (l as i64, n as i64);
    let b = (1..=(ni - li) / 2).map(|k| (k, b_coeff(k, l, n))).collect();
    let c_range = if m == 0 { 0..1 } else { ((li - ni) / 2).max(0)..(m as i64 / 2) };
    let c = c_range.map(|k| (k, c_coeff(k, l, n))).collect();
    let d = (0..m as i64 / 2).map(|k| (k, d_coeff(k, m))).collect();
    Ok(CoefficientSet { l, m, n, b, c, d, b_l: if l >= n { b_l(l, n) } else { None }, c_l: c_l(l, n) })
}

/// The lattice-dependent factor of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    One,
    /// log(2π|η(τ)|²/a)
    LogEta,
    /// Σ′ e^{+imφ}/Rⁿ over Ω(τ, 1); regularized for n = 2.
    Sigma { n: u32, m: i32 },
}

/// (A/2π)^a_pow · a^{−scale_pow} · atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartKey {
    pub a_pow: u32,
    pub scale_pow: u32,
    pub atom: Atom,
}

/// Exact coefficient of one term: Σ rational·part.
pub type SymCoeff = BTreeMap<PartKey, BigRational>;

/// S_{l,m,n} with symbolic coefficients keyed by (power of u, has log u).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolicExpr {
    pub terms: BTreeMap<(i32, bool), SymCoeff>,
}

impl SymbolicExpr {
    fn add(&mut self, power: i32, with_log: bool, key: PartKey, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let coeff = self.terms.entry((power, with_log)).or_default();
        let slot = coeff.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            coeff.remove(&key);
            if coeff.is_empty() {
                self.terms.remove(&(power, with_log));
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every `s(n, m)` atom that appears.
    pub fn sigma_atoms(&self) -> Vec<(u32, i32)> {
        let mut out: Vec<(u32, i32)> = self
            .terms
            .values()
            .flat_map(|c| c.keys())
            .filter_map(|k| match k.atom {
                Atom::Sigma { n, m } => Some((n, m)),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for SymbolicExpr {
    /// Terms `c*(A/2pi)^k*s(n,m)/a^j*u^p*log(u)`; `s~(2,m)` marks a
    /// regularized n = 2 atom and `logeta` is log(2π|η|²/a).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(p, with_log), coeff) in &self.terms {
            for (k, c) in coeff {
                let mut factors = vec![format_rational(&c.abs())];
                match k.a_pow {
                    0 => {}
                    1 => factors.push("(A/2pi)".into()),
                    e => factors.push(format!("(A/2pi)^{e}")),
                }
                match k.atom {
                    Atom::One => {}
                    Atom::LogEta => factors.push("logeta".into()),
                    Atom::Sigma { n: 2, m } => factors.push(format!("s~(2,{m})")),
                    Atom::Sigma { n, m } => factors.push(format!("s({n},{m})")),
                }
                let last = factors.last_mut().expect("coefficient factor");
                match k.scale_pow {
                    0 => {}
                    1 => last.push_str("/a"),
                    e => last.push_str(&format!("/a^{e}")),
                }
                match p {
                    0 => {}
                    1 => factors.push("u".into()),
                    _ => factors.push(format!("u^{p}")),
                }
                if with_log {
                    factors.push("log(u)".into());
                }
                let body = factors.join("*");
                let neg = c.is_negative();
                match (first, neg) {
                    (true, false) => write!(f, "{body}")?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

/// Why an expression has no terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// Odd m: every term cancels against its inversion partner.
    OddM,
    /// m ≠ 0 with (l − n)/2 > m/2 − 1.
    IdenticallyZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialTerm {
    pub coeff: Complex64,
    pub power: i32,
    pub with_log: bool,
}

/// A closed-form S_{l,m,n}(u) as Σ c·uᵖ (log u)^{0|1}.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialExpression {
    pub l: u32,
    pub m: i32,
    pub n: u32,
    /// The lattice when the expression belongs to one lattice.
    pub spec: Option<LatticeSpec>,
    pub terms: Vec<RadialTerm>,
    pub symbolic: Option<SymbolicExpr>,
    pub empty_reason: Option<EmptyReason>,
}

impl RadialExpression {
    fn empty(l: u32, m: i32, n: u32, spec: Option<LatticeSpec>, reason: Option<EmptyReason>) -> Self {
        Self { l, m, n, spec, terms: Vec::new(), symbolic: Some(SymbolicExpr::default()), empty_reason: reason }
    }

    /// Build from numeric terms, merging equal (power, log) pairs.
    pub fn from_terms(l: u32, m: i32, n: u32, spec: Option<LatticeSpec>, terms: impl IntoIterator<Item = RadialTerm>) -> Self {
        let mut map: BTreeMap<(i32, bool), Complex64> = BTreeMap::new();
        for t in terms {
            *map.entry((t.power, t.with_log)).or_default() += t.coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|((power, with_log), coeff)| RadialTerm { coeff, power, with_log })
            .collect();
        Self { l, m, n, spec, terms, symbolic: None, empty_reason: None }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of uᵖ (log u if `with_log`).
    pub fn coefficient(&self, power: i32, with_log: bool) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.power == power && t.with_log == with_log)
            .map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    /// d/du of the expression (meta unchanged).
    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let p = t.power as f64;
            if t.power != 0 {
                out.push(RadialTerm { coeff: t.coeff * p, power: t.power - 1, with_log: t.with_log });
            }
            if t.with_log {
                out.push(RadialTerm { coeff: t.coeff, power: t.power - 1, with_log: false });
            }
        }
        Self::from_terms(self.l, self.m, self.n, self.spec, out)
    }

    /// ∫₀ᵘ of the expression (meta unchanged); fails on u⁻¹ terms.
    pub fn integral(&self) -> Result<Self> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.power <= -1 {
                return Err(Error::Structural(format!("integral of u^{} from 0 diverges", t.power)));
            }
            let q = (t.power + 1) as f64;
            out.push(RadialTerm { coeff: t.coeff / q, power: t.power + 1, with_log: t.with_log });
            if t.with_log {
                out.push(RadialTerm { coeff: -t.coeff / (q * q), power: t.power + 1, with_log: false });
            }
        }
        Ok(Self::from_terms(self.l, self.m, self.n, self.spec, out))
    }

    /// Numeric formula, `c*u^p*log(u)` terms with complex c printed as (re±im i).
    pub fn formula(&self) -> String {
        if let Some(sym) = &self.symbolic {
            return sym.to_string();
        }
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.im == 0.0 && t.coeff.re < 0.0;
            out.push_str(match (i, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if t.coeff.im == 0.0 {
                out.push_str(&format!("{:e}", t.coeff.re.abs()));
            } else {
                out.push_str(&format!("({:e}{:+e}i)", t.coeff.re, t.coeff.im));
            }
            match t.power {
                0 => {}
                1 => out.push_str("*u"),
                p => out.push_str(&format!("*u^{p}")),
            }
            if t.with_log {
                out.push_str("*log(u)");
            }
        }
        out
    }
}

pub fn evaluate(expr: &RadialExpression, u: f64) -> Result<Complex64> {
    if u <= 0.0 && expr.terms.iter().any(|t| t.with_log || t.power < 0) {
        return Err(Error::InvalidArgument(format!("u = {u} must be positive for log or negative-power terms")));
    }
    Ok(expr
        .terms
        .iter()
        .map(|t| {
            let base = if t.power == 0 { 1.0 } else { u.powi(t.power) };
            t.coeff * if t.with_log { base * u.ln() } else { base }
        })
        .sum())
}

/// Value of `s(n, m)` for one lattice.
pub fn sigma_atom(n: u32, m: i32, tau: Complex64) -> Result<Complex64> {
    let mu = m.unsigned_abs();
    if mu == 0 {
        if let Some(lat) = crate::lattice::CanonicalLattice::from_tau(tau) {
            if n.is_multiple_of(2) && n >= 4 {
                return Ok(Complex64::new(sigma_zero_dirichlet(n / 2, lat)?, 0.0));
            }
        }
    }
    let v = sigma_regularized(n, mu, tau)?;
    Ok(if m >= 0 { v.conj() } else { v })
}

fn atom_value(atom: Atom, spec: &LatticeSpec) -> Result<Complex64> {
    match atom {
        Atom::One => Ok(Complex64::new(1.0, 0.0)),
        Atom::LogEta => {
            let eta = eta_value(spec.tau())?.value;
            Ok(Complex64::new((2.0 * PI * eta.norm_sqr() / spec.a()).ln(), 0.0))
        }
        Atom::Sigma { n, m } => sigma_atom(n, m, spec.tau()),
    }
}

/// Numeric coefficient of a symbolic coefficient at one lattice.
pub fn realize_coefficient(coeff: &SymCoeff, spec: &LatticeSpec) -> Result<Complex64> {
    let a2pi = spec.unit_cell_area() / (2.0 * PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in coeff {
        let scale = a2pi.powi(k.a_pow as i32) / spec.a().powi(k.scale_pow as i32);
        acc += to_f64(c) * scale * atom_value(k.atom, spec)?;
    }
    Ok(acc)
}

fn realize(l: u32, m: i32, n: u32, sym: SymbolicExpr, spec: LatticeSpec) -> Result<RadialExpression> {
    let mut terms = Vec::with_capacity(sym.terms.len());
    for (&(power, with_log), coeff) in &sym.terms {
        terms.push(RadialTerm { coeff: realize_coefficient(coeff, &spec)?, power, with_log });
    }
    let mut out = RadialExpression::from_terms(l, m, n, Some(spec), terms);
    out.symbolic = Some(sym);
    Ok(out)
}

fn part(a_pow: u32, scale_pow: u32, atom: Atom) -> PartKey {
    PartKey { a_pow, scale_pow, atom }
}

/// Symbolic S_{l,0,n}.
pub fn s_zero_symbolic(l: u32, n: u32) -> Result<SymbolicExpr> {
    check_parity(l, n)?;
    if n < 2 {
        return Err(Error::InvalidOrder(format!("n = {n} must be >= 2")));
    }
    let (li, ni) = (l as i64, n as i64);
    let mut e = SymbolicExpr::default();
    let low = n as i32 - 2;
    if l < n {
        for k in 2..=(ni - li) / 2 {
            let key = part(2 * k as u32, 2 * k as u32, Atom::Sigma { n: 2 * k as u32, m: 0 });
            e.add(n as i32 - 2 * k as i32, false, key, b_coeff(k, l, n));
        }
        let b2 = b_coeff(1, l, n);
        e.add(low, true, part(1, 0, Atom::One), -b2.clone());
        e.add(low, false, part(1, 0, Atom::One), -(&b2 * c_l(l, n)));
        e.add(low, false, part(1, 0, Atom::LogEta), -b2);
        e.add(n as i32, false, part(0, 0, Atom::One), -c_coeff(0, l, n) / int(8));
    } else {
        let bl = b_l(l, n).expect("l >= n");
        e.add(low, false, part(1, 0, Atom::One), bl);
        if l == n {
            e.add(n as i32, false, part(0, 0, Atom::One), -c_coeff(0, l, n) / int(8));
        }
    }
    Ok(e)
}

/// Symbolic S_{l,m,n} for even m ≠ 0 from the two-sum general form.
pub fn s_even_symbolic(l: u32, m: i32, n: u32) -> Result<SymbolicExpr> {
    check_parity(l, n)?;
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidOrder(format!("m = {m} must be even and nonzero")));
    }
    let (li, ni) = (l as i64, n as i64);
    let mu = m.unsigned_abs() as i64;
    let im = sign(mu / 2);
    let mut e = SymbolicExpr::default();
    for k in 1..=(ni - li) / 2 {
        let key = part(2 * k as u32, 2 * k as u32, Atom::Sigma { n: 2 * k as u32, m });
        e.add(n as i32 - 2 * k as i32, false, key, &im * b_coeff(k, l, n));
    }
    for k in ((li - ni) / 2).max(0)..mu / 2 {
        let key = part(1, 2 * k as u32 + 2, Atom::Sigma { n: 2 * k as u32 + 2, m });
        let c = &im * c_coeff(k, l, n) * d_coeff(k, mu as u32) / int(2);
        e.add(n as i32 + 2 * k as i32, false, key, c);
    }
    Ok(e)
}

/// S_{l,0,n}(u; τ, a).
#[allow(non_snake_case)]
pub fn S_zero(l: u32, n: u32, spec: &LatticeSpec) -> Result<RadialExpression> {
    realize(l, 0, n, s_zero_symbolic(l, n)?, *spec)
}

/// S_{l,m,n}(u; τ, a) for m ≠ 0 (regularized σ̃₂ throughout). Odd m gives
/// the empty expression flagged [`EmptyReason::OddM`].
#[allow(non_snake_case)]
pub fn S_even(l: u32, m: i32, n: u32, spec: &LatticeSpec) -> Result<RadialExpression> {
    check_parity(l, n)?;
    if m % 2 != 0 {
        return Ok(RadialExpression::empty(l, m, n, Some(*spec), Some(EmptyReason::OddM)));
    }
    if m == 0 {
        return Err(Error::InvalidOrder("m = 0 is handled by S_zero".into()));
    }
    let sym = s_even_symbolic(l, m, n)?;
    if sym.is_empty() {
        return Ok(RadialExpression::empty(l, m, n, Some(*spec), Some(EmptyReason::IdenticallyZero)));
    }
    realize(l, m, n, sym, *spec)
}

/// S_{l,m,n} for any even m.
#[allow(non_snake_case)]
pub fn S(l: u32, m: i32, n: u32, spec: &LatticeSpec) -> Result<RadialExpression> {
    if m == 0 {
        S_zero(l, n, spec)
    } else {
        S_even(l, m, n, spec)
    }
}

/// The four Bessel recurrences linking neighbouring (l, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recurrence {
    /// (l, n) → (l − 1, n − 1) by u^{−l}∂_u u^l
    R1,
    /// (l, n) → (l + 1, n − 1) by −u^l ∂_u u^{−l}
    R2,
    /// (l, n) → (l + 1, n + 1) by u^{−1−l}∫₀ᵘ v^{1+l}
    R3,
    /// (l, n) → (l − 1, n + 1) by the boundary constant minus u^{l−1}∫₀ᵘ v^{1−l}; needs 2 ≤ l ≤ n
    R4,
}

impl Recurrence {
    pub const ALL: [Recurrence; 4] = [Recurrence::R1, Recurrence::R2, Recurrence::R3, Recurrence::R4];

    pub fn target(self, l: u32, n: u32) -> Result<(u32, u32)> {
        let (l, n) = (l as i64, n as i64);
        let (tl, tn) = match self {
            Recurrence::R1 => (l - 1, n - 1),
            Recurrence::R2 => (l + 1, n - 1),
            Recurrence::R3 => (l + 1, n + 1),
            Recurrence::R4 => (l - 1, n + 1),
        };
        if self == Recurrence::R4 && (l < 2 || l > n) {
            return Err(Error::InvalidOrder(format!("R4 needs 2 <= l <= n (got l = {l}, n = {n})")));
        }
        if tl < 0 || tn < 2 {
            return Err(Error::InvalidOrder(format!("{self:?} maps (l, n) = ({l}, {n}) outside l >= 0, n >= 2")));
        }
        Ok((tl as u32, tn as u32))
    }

    /// Image of c·uᵖ (·log u) as a list of (power, log, multiplier).
    fn image(self, l: u32, p: i32, with_log: bool) -> Result<Vec<(i32, bool, BigRational)>> {
        let l = l as i64;
        let p64 = p as i64;
        let mut out = Vec::new();
        match self {
            Recurrence::R1 | Recurrence::R2 => {
                let (factor, s) = match self {
                    Recurrence::R1 => (p64 + l, BigRational::one()),
                    _ => (p64 - l, -BigRational::one()),
                };
                out.push((p - 1, with_log, &s * int(factor)));
                if with_log {
                    out.push((p - 1, false, s));
                }
            }
            Recurrence::R3 | Recurrence::R4 => {
                let (q, s) = match self {
                    Recurrence::R3 => (p64 + l + 1, BigRational::one()),
                    _ => (p64 + 1 - l, -BigRational::one()),
                };
                if q <= -1 {
                    return Err(Error::Structural(format!("{self:?} would integrate v^{q} from 0")));
                }
                let inv = BigRational::new(BigInt::one(), BigInt::from(q + 1));
                out.push((p + 1, with_log, &s * &inv));
                if with_log {
                    out.push((p + 1, false, -(&s * &inv * &inv)));
                }
            }
        }
        Ok(out)
    }
}

fn boundary_part(l: u32, m: i32, n: u32) -> Result<(PartKey, BigRational)> {
    let order = n + 2 - l;
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::InvalidOrder(format!("R4 boundary order n - l + 2 = {order} must be even and >= 2")));
    }
    if m == 0 && order == 2 {
        return Err(Error::Divergent("R4 boundary term needs sigma_2^(0)".into()));
    }
    let c = sign(m.unsigned_abs() as i64 / 2) / (pow2(l as i64 - 1) * fact(l as i64 - 1).unwrap());
    Ok((part(order, order, Atom::Sigma { n: order, m }), c))
}

/// Apply one recurrence to a symbolic expression of order (l, m, n).
pub fn recur_symbolic(which: Recurrence, l: u32, m: i32, n: u32, expr: &SymbolicExpr) -> Result<SymbolicExpr> {
    let (tl, _) = which.target(l, n)?;
    let boundary = if which == Recurrence::R4 { Some(boundary_part(l, m, n)?) } else { None };
    let mut out = SymbolicExpr::default();
    for (&(p, with_log), coeff) in &expr.terms {
        for (tp, tlog, mult) in which.image(l, p, with_log)? {
            for (k, c) in coeff {
                out.add(tp, tlog, *k, c * &mult);
            }
        }
    }
    if let Some((key, c)) = boundary {
        out.add(tl as i32, false, key, c);
    }
    Ok(out)
}

/// Apply one recurrence to a radial expression, updating (l, n).
pub fn recur_apply(which: Recurrence, expr: &RadialExpression) -> Result<RadialExpression> {
    let (tl, tn) = which.target(expr.l, expr.n)?;
    if let (Some(sym), Some(spec)) = (&expr.symbolic, expr.spec) {
        let out = recur_symbolic(which, expr.l, expr.m, expr.n, sym)?;
        return realize(tl, expr.m, tn, out, spec);
    }
    // Purely numeric path, e.g. for expressions combined over several lattices.
    let mut terms = Vec::new();
    for t in &expr.terms {
        for (tp, tlog, mult) in which.image(expr.l, t.power, t.with_log)? {
            terms.push(RadialTerm { coeff: t.coeff * to_f64(&mult), power: tp, with_log: tlog });
        }
    }
    if which == Recurrence::R4 {
        let spec = expr
            .spec
            .ok_or_else(|| Error::Unsupported("R4 on a multi-lattice expression needs each lattice's boundary term".into()))?;
        let (key, c) = boundary_part(expr.l, expr.m, expr.n)?;
        let coeff = realize_coefficient(&BTreeMap::from([(key, c)]), &spec)?;
        terms.push(RadialTerm { coeff, power: tl as i32, with_log: false });
    }
    Ok(RadialExpression::from_terms(tl, expr.m, tn, expr.spec, terms))
}
