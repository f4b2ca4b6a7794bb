//! Dedekind η, Weber's η-quotients 𝔣, 𝔣₁, 𝔣₂ and the Jacobi θ-constants,
//! plus the table of exact special values at the four canonical lattices.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::eisenstein::divisor_sigma_f64;
use crate::error::{Error, Result};
use crate::lattice::{reduce_tau, CanonicalLattice, TauMove};

/// Γ(1/4) to 30 significant digits.
pub const GAMMA_QUARTER: &str = "3.62560990822190831193068515587";
/// Γ(1/3) to 30 significant digits.
pub const GAMMA_THIRD: &str = "2.67893853470774763365569294097";

pub fn gamma_quarter() -> f64 {
    GAMMA_QUARTER.parse().expect("valid literal")
}

pub fn gamma_third() -> f64 {
    GAMMA_THIRD.parse().expect("valid literal")
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// η(τ) tagged with whether it came from the exact table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaValue {
    pub value: Complex64,
    pub tau: Complex64,
    pub is_exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeberQuotients {
    pub f: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
}

/// ϑ₂(0;τ), ϑ₃(0;τ), ϑ₄(0;τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaConstants {
    pub t2: Complex64,
    pub t3: Complex64,
    pub t4: Complex64,
}

/// log η(τ) = iπτ/12 − Σ σ̂₁(r)/r·q^r evaluated at τ as given.
fn log_eta_series(tau: Complex64) -> Result<Complex64> {
    let q = (2.0 * PI * I * tau).exp();
    let mut acc = I * PI * tau / 12.0;
    let mut qr = Complex64::new(1.0, 0.0);
    for r in 1..=100_000u64 {
        qr *= q;
        let term = qr * (divisor_sigma_f64(1, r) / r as f64);
        acc -= term;
        if term.norm() < 1e-17 * acc.norm() {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence(format!("eta series at tau = {tau}")))
}

/// η(τ) by reduction to the fundamental domain and the q-series of log η.
pub fn dedekind_eta(tau: Complex64) -> Result<Complex64> {
    let red = reduce_tau(tau)?;
    let path = red.path(tau);
    let mut value = log_eta_series(red.tau)?.exp();
    // Undo moves from the last one back: η(τ+k) = e^{iπk/12}η(τ) and
    // η(−1/τ) = √(−iτ)η(τ).
    for (j, mv) in red.moves.iter().enumerate().rev() {
        match *mv {
            TauMove::T(k) => value *= (-I * PI * k as f64 / 12.0).exp(),
            TauMove::S => value /= (-I * path[j]).sqrt(),
        }
    }
    Ok(value)
}

/// η(τ), served from the exact table at the four canonical lattices.
pub fn eta_value(tau: Complex64) -> Result<EtaValue> {
    if let Some(key) = CanonicalLattice::from_tau(tau) {
        return Ok(EtaValue { value: special_value(key, SpecialQuantity::Eta), tau, is_exact: true });
    }
    Ok(EtaValue { value: dedekind_eta(tau)?, tau, is_exact: false })
}

/// 𝔣(τ) = e^{−iπ/24}η((τ+1)/2)/η(τ), 𝔣₁(τ) = η(τ/2)/η(τ), 𝔣₂(τ) = √2·η(2τ)/η(τ).
pub fn weber_quotients(tau: Complex64) -> Result<WeberQuotients> {
    let e = dedekind_eta(tau)?;
    let f = (-I * PI / 24.0).exp() * dedekind_eta((tau + 1.0) / 2.0)? / e;
    let f1 = dedekind_eta(tau / 2.0)? / e;
    let f2 = SQRT_2 * dedekind_eta(tau * 2.0)? / e;
    Ok(WeberQuotients { f, f1, f2 })
}

/// ϑ₂ = η𝔣₂², ϑ₃ = η𝔣², ϑ₄ = η𝔣₁².
pub fn theta_constants(tau: Complex64) -> Result<ThetaConstants> {
    let e = dedekind_eta(tau)?;
    let w = weber_quotients(tau)?;
    Ok(ThetaConstants { t2: e * w.f2 * w.f2, t3: e * w.f * w.f, t4: e * w.f1 * w.f1 })
}

/// ϑ₁′(0;τ) = 2η(τ)³.
pub fn theta1_prime(tau: Complex64) -> Result<Complex64> {
    Ok(2.0 * dedekind_eta(tau)?.powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialQuantity {
    Eta,
    F,
    F1,
    F2,
}

impl SpecialQuantity {
    pub const ALL: [SpecialQuantity; 4] = [SpecialQuantity::Eta, SpecialQuantity::F, SpecialQuantity::F1, SpecialQuantity::F2];

    pub fn name(self) -> &'static str {
        match self {
            SpecialQuantity::Eta => "eta",
            SpecialQuantity::F => "f",
            SpecialQuantity::F1 => "f1",
            SpecialQuantity::F2 => "f2",
        }
    }
}

/// One exact constant: decimal literal plus the formula it stands for.
#[derive(Debug, Clone)]
pub struct SpecialEntry {
    pub key: CanonicalLattice,
    pub which: SpecialQuantity,
    pub re: &'static str,
    pub im: &'static str,
    pub formula: &'static str,
    pub value: Complex64,
}

/// Immutable table of η, 𝔣, 𝔣₁, 𝔣₂ at τ ∈ {i, 2i, e^{iπ/3}, √3 i}.
#[derive(Debug, Clone)]
pub struct SpecialValueTable {
    entries: Vec<SpecialEntry>,
}

type FormulaFn = fn(f64, f64) -> Complex64;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[rustfmt::skip]
const RAW: [(CanonicalLattice, SpecialQuantity, &str, &str, &str, FormulaFn); 16] = {
    use CanonicalLattice::*;
    use SpecialQuantity::*;
    [
        (Square, Eta, "0.768225422326056659002594179576", "0", "Gamma(1/4)/(2*pi^(3/4))",
            |g4, _| real(g4 / (2.0 * PI.powf(0.75)))),
        (Square, F, "1.18920711500272106671749997056", "0", "2^(1/4)", |_, _| real(2f64.powf(0.25))),
        (Square, F1, "1.09050773266525765920701065576", "0", "2^(1/8)", |_, _| real(2f64.powf(0.125))),
        (Square, F2, "1.09050773266525765920701065576", "0", "2^(1/8)", |_, _| real(2f64.powf(0.125))),
        (Rect2, Eta, "0.592382781332415885290363374492", "0", "Gamma(1/4)/(2^(11/8)*pi^(3/4))",
            |g4, _| real(g4 / (2f64.powf(11.0 / 8.0) * PI.powf(0.75)))),
        (Rect2, F, "1.30169218077615528127581049413", "0", "(4+3*sqrt(2))^(1/8)",
            |_, _| real((4.0 + 3.0 * SQRT_2).powf(0.125))),
        (Rect2, F1, "1.29683955465100966593375411779", "0", "2^(3/8)", |_, _| real(2f64.powf(0.375))),
        (Rect2, F2, "0.837761606599668259353428888801", "0", "2^(1/8)*(4+3*sqrt(2))^(-1/8)",
            |_, _| real(2f64.powf(0.125) * (4.0 + 3.0 * SQRT_2).powf(-0.125))),
        (Hexagonal, Eta, "0.793730335047640519449985183941", "0.104496581019902395925517067662",
            "e^(i*pi/24)*3^(1/8)*Gamma(1/3)^(3/2)/(2*pi)",
            |_, g3| Complex64::from_polar(3f64.powf(0.125) * g3.powf(1.5) / (2.0 * PI), PI / 24.0)),
        (Hexagonal, F, "1.12246204830937298143353304968", "0", "2^(1/6)", |_, _| real(2f64.powf(1.0 / 6.0))),
        (Hexagonal, F1, "1.11285922988344958034721366229", "-0.146510697077342053357367332727", "2^(1/6)*e^(-i*pi/24)",
            |_, _| Complex64::from_polar(2f64.powf(1.0 / 6.0), -PI / 24.0)),
        (Hexagonal, F2, "1.11285922988344958034721366229", "0.146510697077342053357367332727", "2^(1/6)*e^(i*pi/24)",
            |_, _| Complex64::from_polar(2f64.powf(1.0 / 6.0), PI / 24.0)),
        (RectSqrt3, Eta, "0.635420293110300637837690015481", "0", "3^(1/8)*Gamma(1/3)^(3/2)/(2^(4/3)*pi)",
            |_, g3| real(3f64.powf(0.125) * g3.powf(1.5) / (2f64.powf(4.0 / 3.0) * PI))),
        (RectSqrt3, F, "1.25992104989487316476721060728", "0", "2^(1/3)", |_, _| real(2f64.cbrt())),
        (RectSqrt3, F1, "1.24904842594126611821165669008", "0", "2^(1/12)*(2+sqrt(3))^(1/8)",
            |_, _| real(2f64.powf(1.0 / 12.0) * (2.0 + 3f64.sqrt()).powf(0.125))),
        (RectSqrt3, F2, "0.898653747122334874457195807805", "0", "2^(1/12)*(2-sqrt(3))^(1/8)",
            |_, _| real(2f64.powf(1.0 / 12.0) * (2.0 - 3f64.sqrt()).powf(0.125))),
    ]
};

impl SpecialValueTable {
    /// Parse every literal and check it against its formula to 10⁻¹⁵ relative.
    pub fn build() -> Result<Self> {
        let (g4, g3) = (gamma_quarter(), gamma_third());
        let mut entries = Vec::with_capacity(RAW.len());
        for (key, which, re, im, formula, eval) in RAW {
            let value = Complex64::new(parse(re)?, parse(im)?);
            let check = eval(g4, g3);
            if (check - value).norm() > 1e-15 * value.norm() {
                return Err(Error::Structural(format!(
                    "tabulated {} at {} disagrees with {formula}: {value} vs {check}",
                    which.name(),
                    key.tau_label()
                )));
            }
            entries.push(SpecialEntry { key, which, re, im, formula, value });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[SpecialEntry] {
        &self.entries
    }

    pub fn get(&self, key: CanonicalLattice, which: SpecialQuantity) -> &SpecialEntry {
        self.entries
            .iter()
            .find(|e| e.key == key && e.which == which)
            .expect("table has every (key, quantity) pair")
    }
}

fn parse(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Structural(format!("bad literal {s}")))
}

pub fn special_table() -> &'static SpecialValueTable {
    static TABLE: OnceLock<SpecialValueTable> = OnceLock::new();
    TABLE.get_or_init(|| SpecialValueTable::build().expect("special value table is self-consistent"))
}

/// Exact tabulated constant at a canonical lattice.
pub fn special_value(key: CanonicalLattice, which: SpecialQuantity) -> Complex64 {
    special_table().get(key, which).value
}

/// Exact tabulated constant looked up by τ; unknown τ is an error.
pub fn special_value_at(tau: Complex64, which: SpecialQuantity) -> Result<Complex64> {
    let key = CanonicalLattice::from_tau(tau)
        .ok_or_else(|| Error::NotTabulated(format!("no exact {} at tau = {tau}", which.name())))?;
    Ok(special_value(key, which))
}
