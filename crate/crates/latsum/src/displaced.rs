//! Displaced high-symmetry point sets written as signed combinations of
//! origin-centred lattices, and σ and S evaluated over them by linearity.
//!
//! A term (w, θ, spec) stands for w copies of the lattice of `spec` rotated
//! by θ·π. Direct sums pick up e^{−imθπ} under rotation and reciprocal sums
//! e^{+imθπ}.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::cylsum::{self, EmptyReason, RadialExpression, RadialTerm};
use crate::eisenstein::{sigma, sigma_regularized};
use crate::error::{Error, Result};
use crate::lattice::{Basis, CanonicalLattice, LatticePoint, LatticeSpec};

const BOUNDARY_SLACK: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumKind {
    Direct,
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinationTerm {
    pub weight: i32,
    /// Rotation angle in units of π.
    pub rotation: Rational64,
    pub spec: LatticeSpec,
}

impl CombinationTerm {
    fn basis(&self, kind: SumKind) -> Basis {
        let b = match kind {
            SumKind::Direct => self.spec.direct_basis(),
            SumKind::Reciprocal => self.spec.reciprocal_basis(),
        };
        if self.rotation.is_zero() {
            b
        } else {
            b.rotated(PI * *self.rotation.numer() as f64 / *self.rotation.denom() as f64)
        }
    }
}

/// e^{i·sign·m·θπ}, exact at multiples of π/2.
pub fn rotation_phase(m: i32, rotation: Rational64, sign: i32) -> Complex64 {
    let t = (rotation * Rational64::from_integer((sign * m) as i64)) % Rational64::from_integer(2);
    let t = if t.is_negative() { t + Rational64::from_integer(2) } else { t };
    let quarter = t * Rational64::from_integer(2);
    if quarter.is_integer() {
        return match quarter.to_integer() {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, PI * *t.numer() as f64 / *t.denom() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCombination {
    pub kind: SumKind,
    pub terms: Vec<CombinationTerm>,
}

fn spec(tau: Complex64, a: f64) -> Result<LatticeSpec> {
    LatticeSpec::new(tau, a)
}

fn check_scale(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidScale(a));
    }
    Ok(())
}

impl LatticeCombination {
    pub fn new(kind: SumKind, terms: Vec<CombinationTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.weight == 0) {
            return Err(Error::InvalidArgument("combination weights must be nonzero".into()));
        }
        Ok(Self { kind, terms })
    }

    fn from_parts(kind: SumKind, parts: &[(i32, i64, LatticeSpec)]) -> Self {
        let terms = parts
            .iter()
            .map(|&(weight, rot_half, spec)| CombinationTerm { weight, rotation: Rational64::new(rot_half, 2), spec })
            .collect();
        Self { kind, terms }
    }

    /// The same point set rotated by θ·π.
    pub fn rotated(&self, theta: Rational64) -> Self {
        let terms = self.terms.iter().map(|t| CombinationTerm { rotation: t.rotation + theta, ..*t }).collect();
        Self { kind: self.kind, terms }
    }

    /// Formal sum of two combinations of the same kind.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::InvalidArgument("cannot add direct and reciprocal combinations".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self { kind: self.kind, terms })
    }

    /// Every signed point of every term with 0 < r ≤ radius.
    pub fn points(&self, radius: f64) -> Vec<(i32, LatticePoint)> {
        self.terms
            .iter()
            .flat_map(|t| t.basis(self.kind).points(radius).into_iter().map(move |p| (t.weight, p)))
            .collect()
    }

    /// Net multiplicity of each point on the disk, keyed by integer
    /// coordinates in `grid`; zero-multiplicity points are dropped.
    /// Points within a relative 1e-9 of the boundary are included so that
    /// rounding cannot split a shell between terms.
    pub fn signed_multiset(&self, grid: &Basis, radius: f64) -> Result<BTreeMap<(i64, i64), i32>> {
        multiset(self.points(radius * BOUNDARY_SLACK).into_iter(), grid)
    }
}

impl fmt::Display for LatticeCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.kind == SumKind::Reciprocal { "Omega_bar" } else { "Omega" };
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.weight < 0 { "-" } else if i > 0 { "+" } else { "" };
            let sep = if i > 0 { " " } else { "" };
            write!(f, "{sep}{sign}{sep}")?;
            if t.weight.abs() != 1 {
                write!(f, "{}*", t.weight.abs())?;
            }
            if !t.rotation.is_zero() {
                write!(f, "R({}pi)", t.rotation)?;
            }
            let tau = t.spec.tau();
            write!(f, "{bar}({}{:+}i, {})", tau.re, tau.im, t.spec.a())?;
        }
        Ok(())
    }
}

fn multiset(points: impl Iterator<Item = (i32, LatticePoint)>, grid: &Basis) -> Result<BTreeMap<(i64, i64), i32>> {
    let mut out: BTreeMap<(i64, i64), i32> = BTreeMap::new();
    for (w, p) in points {
        let (c1, c2) = grid.coordinates(p.z());
        let (k1, k2) = (c1.round(), c2.round());
        if (c1 - k1).abs() > 1e-6 || (c2 - k2).abs() > 1e-6 {
            return Err(Error::Structural(format!("point {} is not on the comparison grid", p.z())));
        }
        *out.entry((k1 as i64, k2 as i64)).or_default() += w;
    }
    out.retain(|_, w| *w != 0);
    Ok(out)
}

/// Ω̄ˣ(i, a) = Ω̄(i/2, 2a) − Ω̄(i, a).
pub fn square_x(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(SumKind::Reciprocal, &[(1, 0, spec(i / 2.0, 2.0 * a)?), (-1, 0, spec(i, a)?)]))
}

/// Ω̄ʸ(i, a) = Ω̄(2i, a) − Ω̄(i, a).
pub fn square_y(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(SumKind::Reciprocal, &[(1, 0, spec(2.0 * i, a)?), (-1, 0, spec(i, a)?)]))
}

/// Ω̄ᴹ(i, a) = Ω̄(i, 2a) − Ω̄(i/2, 2a) + Ω̄(i, a) − Ω̄(2i, a).
pub fn square_m(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(
        SumKind::Reciprocal,
        &[(1, 0, spec(i, 2.0 * a)?), (-1, 0, spec(i / 2.0, 2.0 * a)?), (1, 0, spec(i, a)?), (-1, 0, spec(2.0 * i, a)?)],
    ))
}

/// Ω̄ᴹ(e^{iπ/3}, a) = Ω̄(e^{iπ/3}, 2a) − Ω̄(e^{iπ/3}, a).
pub fn hex_m(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let rho = CanonicalLattice::Hexagonal.tau();
    Ok(LatticeCombination::from_parts(SumKind::Reciprocal, &[(1, 0, spec(rho, 2.0 * a)?), (-1, 0, spec(rho, a)?)]))
}

/// One of the three M sublattices: M₂ = Ω̄(√3 i, a) − Ω̄(e^{iπ/3}, a), and
/// M₁, M₃ its rotations by ±π/3.
pub fn hex_m_sublattice(j: u8, a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let rot = match j {
        1 => Rational64::new(1, 3),
        2 => Rational64::zero(),
        3 => Rational64::new(-1, 3),
        _ => return Err(Error::InvalidArgument(format!("M sublattice index {j} not in 1..=3"))),
    };
    let rho = CanonicalLattice::Hexagonal.tau();
    let m2 = LatticeCombination::from_parts(
        SumKind::Reciprocal,
        &[(1, 0, spec(CanonicalLattice::RectSqrt3.tau(), a)?), (-1, 0, spec(rho, a)?)],
    );
    Ok(m2.rotated(rot))
}

/// Ω̄ᴷ(e^{iπ/3}, a) = C₄Ω̄(e^{iπ/3}, √3a) − Ω̄(e^{iπ/3}, a).
pub fn hex_k(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let rho = CanonicalLattice::Hexagonal.tau();
    Ok(LatticeCombination::from_parts(
        SumKind::Reciprocal,
        &[(1, 1, spec(rho, 3f64.sqrt() * a)?), (-1, 0, spec(rho, a)?)],
    ))
}

/// The individual K sublattices are not origin-centred and have no
/// combination.
pub fn hex_k_sublattice(j: u8, a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    Err(Error::NotOriginCentred(format!(
        "K{j} sublattice lacks inversion symmetry about the origin; only the full K set has a combination"
    )))
}

/// Ω^{W_d}(i, a) = Ω(i, a/2) + Ω(i, a) − Ω(i/2, a) − Ω(2i, a/2).
pub fn square_wyckoff_d(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(
        SumKind::Direct,
        &[(1, 0, spec(i, a / 2.0)?), (1, 0, spec(i, a)?), (-1, 0, spec(i / 2.0, a)?), (-1, 0, spec(2.0 * i, a / 2.0)?)],
    ))
}

/// Ω^{W_b}(i, a), the points a(p₁, p₂ + ½): Ω(i/2, a) − Ω(i, a).
pub fn square_wyckoff_b(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(SumKind::Direct, &[(1, 0, spec(i / 2.0, a)?), (-1, 0, spec(i, a)?)]))
}

/// Ω^{W_c}(i, a), the points a(p₁ + ½, p₂): Ω(2i, a/2) − Ω(i, a).
pub fn square_wyckoff_c(a: f64) -> Result<LatticeCombination> {
    check_scale(a)?;
    let i = Complex64::i();
    Ok(LatticeCombination::from_parts(SumKind::Direct, &[(1, 0, spec(2.0 * i, a / 2.0)?), (-1, 0, spec(i, a)?)]))
}

/// Named high-symmetry point sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisplacedSet {
    SquareGamma,
    SquareX,
    SquareY,
    SquareM,
    HexGamma,
    HexM,
    HexMj(u8),
    HexK,
    HexKj(u8),
    WyckoffB,
    WyckoffC,
    WyckoffD,
}

impl DisplacedSet {
    pub fn kind(self) -> SumKind {
        match self {
            DisplacedSet::WyckoffB | DisplacedSet::WyckoffC | DisplacedSet::WyckoffD => SumKind::Direct,
            _ => SumKind::Reciprocal,
        }
    }

    pub fn lattice(self) -> CanonicalLattice {
        match self {
            DisplacedSet::HexGamma
            | DisplacedSet::HexM
            | DisplacedSet::HexMj(_)
            | DisplacedSet::HexK
            | DisplacedSet::HexKj(_) => CanonicalLattice::Hexagonal,
            _ => CanonicalLattice::Square,
        }
    }

    pub fn name(self) -> String {
        match self {
            DisplacedSet::SquareGamma | DisplacedSet::HexGamma => "gamma".into(),
            DisplacedSet::SquareX => "X".into(),
            DisplacedSet::SquareY => "Y".into(),
            DisplacedSet::SquareM | DisplacedSet::HexM => "M".into(),
            DisplacedSet::HexMj(j) => format!("M{j}"),
            DisplacedSet::HexK => "K".into(),
            DisplacedSet::HexKj(j) => format!("K{j}"),
            DisplacedSet::WyckoffB => "Wb".into(),
            DisplacedSet::WyckoffC => "Wc".into(),
            DisplacedSet::WyckoffD => "Wd".into(),
        }
    }

    /// Look up a set by name on a square or hexagonal lattice.
    pub fn from_name(name: &str, lattice: CanonicalLattice) -> Result<Self> {
        let hex = match lattice {
            CanonicalLattice::Square => false,
            CanonicalLattice::Hexagonal => true,
            other => return Err(Error::Unsupported(format!("no displaced point sets on the {} lattice", other.name()))),
        };
        let set = match (name, hex) {
            ("gamma", false) => DisplacedSet::SquareGamma,
            ("gamma", true) => DisplacedSet::HexGamma,
            ("X", false) => DisplacedSet::SquareX,
            ("Y", false) => DisplacedSet::SquareY,
            ("M", false) => DisplacedSet::SquareM,
            ("M", true) => DisplacedSet::HexM,
            ("M1", true) => DisplacedSet::HexMj(1),
            ("M2", true) => DisplacedSet::HexMj(2),
            ("M3", true) => DisplacedSet::HexMj(3),
            ("K", true) => DisplacedSet::HexK,
            ("K1", true) => DisplacedSet::HexKj(1),
            ("K2", true) => DisplacedSet::HexKj(2),
            ("Wb", false) => DisplacedSet::WyckoffB,
            ("Wc", false) => DisplacedSet::WyckoffC,
            ("Wd", false) => DisplacedSet::WyckoffD,
            _ => return Err(Error::InvalidArgument(format!("unknown point set {name:?} on the {} lattice", lattice.name()))),
        };
        Ok(set)
    }

    pub fn combination(self, a: f64) -> Result<LatticeCombination> {
        match self {
            DisplacedSet::SquareGamma | DisplacedSet::HexGamma => {
                let s = LatticeSpec::canonical(self.lattice(), a)?;
                Ok(LatticeCombination::from_parts(SumKind::Reciprocal, &[(1, 0, s)]))
            }
            DisplacedSet::SquareX => square_x(a),
            DisplacedSet::SquareY => square_y(a),
            DisplacedSet::SquareM => square_m(a),
            DisplacedSet::HexM => hex_m(a),
            DisplacedSet::HexMj(j) => hex_m_sublattice(j, a),
            DisplacedSet::HexK => hex_k(a),
            DisplacedSet::HexKj(j) => hex_k_sublattice(j, a),
            DisplacedSet::WyckoffB => square_wyckoff_b(a),
            DisplacedSet::WyckoffC => square_wyckoff_c(a),
            DisplacedSet::WyckoffD => square_wyckoff_d(a),
        }
    }

    /// Origin-centred basis of period a and the offsets whose translates
    /// make up the set.
    pub fn translates(self, a: f64) -> Result<(Basis, Vec<Complex64>)> {
        check_scale(a)?;
        let s = LatticeSpec::canonical(self.lattice(), a)?;
        let sq3 = 3f64.sqrt();
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let m = |j: u8| match j {
            1 => c(-PI / a, PI / (sq3 * a)),
            2 => c(0.0, 2.0 * PI / (sq3 * a)),
            _ => c(PI / a, PI / (sq3 * a)),
        };
        let k = |j: u8| if j == 1 { c(-2.0 * PI / (3.0 * a), 2.0 * PI / (sq3 * a)) } else { c(2.0 * PI / (3.0 * a), 2.0 * PI / (sq3 * a)) };
        let offsets = match self {
            DisplacedSet::SquareGamma | DisplacedSet::HexGamma => vec![c(0.0, 0.0)],
            DisplacedSet::SquareX => vec![c(PI / a, 0.0)],
            DisplacedSet::SquareY => vec![c(0.0, PI / a)],
            DisplacedSet::SquareM => vec![c(PI / a, PI / a)],
            DisplacedSet::HexM => vec![m(1), m(2), m(3)],
            DisplacedSet::HexMj(j) if (1..=3).contains(&j) => vec![m(j)],
            DisplacedSet::HexK => vec![k(1), k(2)],
            DisplacedSet::HexKj(j) if (1..=2).contains(&j) => vec![k(j)],
            DisplacedSet::WyckoffB => vec![c(0.0, a / 2.0)],
            DisplacedSet::WyckoffC => vec![c(a / 2.0, 0.0)],
            DisplacedSet::WyckoffD => vec![c(a / 2.0, a / 2.0)],
            _ => return Err(Error::InvalidArgument(format!("no sublattice {}", self.name()))),
        };
        let basis = match self.kind() {
            SumKind::Direct => s.direct_basis(),
            SumKind::Reciprocal => s.reciprocal_basis(),
        };
        Ok((basis, offsets))
    }

    /// The set enumerated from its translates on the disk 0 < r ≤ radius.
    pub fn explicit_points(self, a: f64, radius: f64) -> Result<Vec<LatticePoint>> {
        let (basis, offsets) = self.translates(a)?;
        let mut pts: Vec<LatticePoint> = offsets.iter().flat_map(|&o| basis.translated_points(o, radius)).collect();
        pts.sort_by(|p, q| p.r.total_cmp(&q.r).then(p.phi.total_cmp(&q.phi)));
        Ok(pts)
    }

    /// A basis on which every point of the set and of its combination has
    /// integer coordinates.
    pub fn grid(self, a: f64) -> Result<Basis> {
        let (basis, _) = self.translates(a)?;
        let div = match self.lattice() {
            CanonicalLattice::Hexagonal => 6.0,
            _ => 2.0,
        };
        Basis::new(basis.w1 / div, basis.w2 / div)
    }

    /// Multiset of the explicit set on the grid.
    pub fn explicit_multiset(self, a: f64, radius: f64) -> Result<BTreeMap<(i64, i64), i32>> {
        let grid = self.grid(a)?;
        multiset(self.explicit_points(a, radius * BOUNDARY_SLACK)?.into_iter().map(|p| (1, p)), &grid)
    }
}

/// Every built-in set that has a combination.
pub const BUILT_IN: [DisplacedSet; 10] = [
    DisplacedSet::SquareX,
    DisplacedSet::SquareY,
    DisplacedSet::SquareM,
    DisplacedSet::HexM,
    DisplacedSet::HexMj(1),
    DisplacedSet::HexMj(2),
    DisplacedSet::HexMj(3),
    DisplacedSet::HexK,
    DisplacedSet::WyckoffB,
    DisplacedSet::WyckoffD,
];

/// Σⱼ wⱼ e^{−imθⱼ} aⱼ⁻ⁿ σₙ⁽ᵐ⁾(τⱼ) over a direct-lattice combination.
/// `regularized` is required for n = 2.
pub fn sigma_over(comb: &LatticeCombination, n: u32, m: u32, regularized: bool) -> Result<Complex64> {
    if comb.kind != SumKind::Direct {
        return Err(Error::InvalidArgument("sigma_over needs a direct-lattice combination".into()));
    }
    if n == 2 && !regularized {
        return Err(Error::InvalidArgument(
            "n = 2 terms are conditionally convergent; Eisenstein-order values of different lattices cannot be mixed".into(),
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in &comb.terms {
        let v = if regularized { sigma_regularized(n, m, t.spec.tau())? } else { sigma(n, m, t.spec.tau())?.value };
        acc += t.weight as f64 * rotation_phase(m as i32, t.rotation, -1) * t.spec.a().powi(-(n as i32)) * v;
    }
    Ok(acc)
}

/// Σⱼ wⱼ e^{imθⱼ} S_{l,m,n}(u; τⱼ, aⱼ) over a reciprocal combination,
/// merged term-wise.
#[allow(non_snake_case)]
pub fn S_over(comb: &LatticeCombination, l: u32, m: i32, n: u32) -> Result<RadialExpression> {
    if comb.kind != SumKind::Reciprocal {
        return Err(Error::InvalidArgument("S_over needs a reciprocal-lattice combination".into()));
    }
    if (l as i64 - n as i64).is_odd() {
        return Err(Error::InvalidOrder(format!("l - n = {} is odd", l as i64 - n as i64)));
    }
    let single = match comb.terms.as_slice() {
        [t] if t.weight == 1 && t.rotation.is_zero() => Some(t.spec),
        _ => None,
    };
    if let Some(s) = single {
        return cylsum::S(l, m, n, &s);
    }
    if m % 2 != 0 {
        let mut e = RadialExpression::from_terms(l, m, n, None, []);
        e.empty_reason = Some(EmptyReason::OddM);
        return Ok(e);
    }
    let mut terms = Vec::new();
    let mut all_zero = true;
    for t in &comb.terms {
        let part = cylsum::S(l, m, n, &t.spec)?;
        all_zero &= part.empty_reason == Some(EmptyReason::IdenticallyZero);
        let w = t.weight as f64 * rotation_phase(m, t.rotation, 1);
        terms.extend(part.terms.iter().map(|r| RadialTerm { coeff: r.coeff * w, ..*r }));
    }
    let mut out = RadialExpression::from_terms(l, m, n, None, terms);
    if all_zero {
        out.empty_reason = Some(EmptyReason::IdenticallyZero);
    }
    Ok(out)
}
