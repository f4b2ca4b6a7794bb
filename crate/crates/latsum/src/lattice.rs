//! Direct and reciprocal Bravais lattices in the complex-plane representation
//! Ω(τ, a) = {a(p₁ + p₂τ)}, point enumeration, and reduction of τ to the
//! standard fundamental domain.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of T/S moves performed by [`reduce_tau`].
pub const REDUCTION_LIMIT: usize = 64;

/// Slack used when deciding whether τ already lies in the fundamental domain.
const DOMAIN_SLACK: f64 = 1e-14;

/// A Bravais lattice given by its shape τ (Im τ > 0) and scale a > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    tau: Complex64,
    a: f64,
}

impl LatticeSpec {
    pub fn new(tau: Complex64, a: f64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::InvalidTau(tau));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidScale(a));
        }
        Ok(Self { tau, a })
    }

    pub fn canonical(key: CanonicalLattice, a: f64) -> Result<Self> {
        Self::new(key.tau(), a)
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// A = a²·Im τ.
    pub fn unit_cell_area(&self) -> f64 {
        self.a * self.a * self.tau.im
    }

    pub fn with_scale(&self, a: f64) -> Result<Self> {
        Self::new(self.tau, a)
    }

    /// Basis (a, aτ) of Ω(τ, a).
    pub fn direct_basis(&self) -> Basis {
        Basis { w1: Complex64::new(self.a, 0.0), w2: self.tau * self.a }
    }

    /// Basis of Ω̄(τ, a) = (2πi/A)·Ω(τ, a); the duals of ê₁ and ê₂ are
    /// perpendicular to ê₂ and ê₁ respectively and carry the 2π/A factor.
    pub fn reciprocal_basis(&self) -> Basis {
        let f = Complex64::new(0.0, 2.0 * PI / self.unit_cell_area());
        Basis { w1: f * self.a, w2: f * self.tau * self.a }
    }

    /// The canonical lattice whose τ equals this one, if any.
    pub fn canonical_key(&self) -> Option<CanonicalLattice> {
        CanonicalLattice::from_tau(self.tau)
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(tau = {}{:+}i, a = {})", self.tau.re, self.tau.im, self.a)
    }
}

/// The four lattices with built-in exact values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalLattice {
    /// τ = i
    Square,
    /// τ = 2i
    Rect2,
    /// τ = e^{iπ/3}
    Hexagonal,
    /// τ = √3 i
    RectSqrt3,
}

impl CanonicalLattice {
    pub const ALL: [CanonicalLattice; 4] =
        [CanonicalLattice::Square, CanonicalLattice::Rect2, CanonicalLattice::Hexagonal, CanonicalLattice::RectSqrt3];

    pub fn tau(self) -> Complex64 {
        match self {
            CanonicalLattice::Square => Complex64::new(0.0, 1.0),
            CanonicalLattice::Rect2 => Complex64::new(0.0, 2.0),
            CanonicalLattice::Hexagonal => Complex64::new(0.5, 3f64.sqrt() / 2.0),
            CanonicalLattice::RectSqrt3 => Complex64::new(0.0, 3f64.sqrt()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CanonicalLattice::Square => "square",
            CanonicalLattice::Rect2 => "rect2",
            CanonicalLattice::Hexagonal => "hex",
            CanonicalLattice::RectSqrt3 => "rectsqrt3",
        }
    }

    /// Human-readable τ, e.g. `e^(i*pi/3)`.
    pub fn tau_label(self) -> &'static str {
        match self {
            CanonicalLattice::Square => "i",
            CanonicalLattice::Rect2 => "2i",
            CanonicalLattice::Hexagonal => "e^(i*pi/3)",
            CanonicalLattice::RectSqrt3 => "sqrt(3)i",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn from_tau(tau: Complex64) -> Option<Self> {
        Self::ALL.into_iter().find(|k| (k.tau() - tau).norm() <= 1e-14)
    }
}

/// A lattice point in Cartesian and polar form, φ ∈ (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub phi: f64,
}

impl LatticePoint {
    pub fn from_complex(z: Complex64) -> Self {
        // Adding 0.0 maps −0.0 to +0.0 so the negative real axis gets φ = π.
        let x = z.re + 0.0;
        let y = z.im + 0.0;
        Self { x, y, r: x.hypot(y), phi: y.atan2(x) }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Two generating vectors of a (possibly rotated) Bravais lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    pub w1: Complex64,
    pub w2: Complex64,
}

impl Basis {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        let b = Self { w1, w2 };
        if !(b.area() > 0.0) {
            return Err(Error::InvalidArgument("degenerate basis".into()));
        }
        Ok(b)
    }

    /// Cell area |w₁ × w₂|.
    pub fn area(&self) -> f64 {
        (self.w1.re * self.w2.im - self.w1.im * self.w2.re).abs()
    }

    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        Self { w1: self.w1 * r, w2: self.w2 * r }
    }

    pub fn point(&self, p1: i64, p2: i64) -> Complex64 {
        self.w1 * p1 as f64 + self.w2 * p2 as f64
    }

    /// Half of the longest diagonal of the cell centred on a lattice point;
    /// every point of the plane is within this distance of some lattice point.
    pub fn half_diagonal(&self) -> f64 {
        0.5 * (self.w1 + self.w2).norm().max((self.w1 - self.w2).norm())
    }

    pub fn shortest_vector(&self) -> f64 {
        let pts = self.points(2.0 * self.w1.norm().max(self.w2.norm()));
        pts.first().map(|p| p.r).unwrap_or(0.0)
    }

    /// Real coordinates (c₁, c₂) with z = c₁w₁ + c₂w₂.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = self.w1.re * self.w2.im - self.w1.im * self.w2.re;
        let c1 = (z.re * self.w2.im - z.im * self.w2.re) / det;
        let c2 = (self.w1.re * z.im - self.w1.im * z.re) / det;
        (c1, c2)
    }

    /// Index bounds covering the disk of the given radius around −offset.
    fn index_bounds(&self, offset: Complex64, radius: f64) -> (i64, i64, i64, i64) {
        let area = self.area();
        // Row spacing along w₂ is area/|w₁|, and vice versa.
        let e2 = (radius * self.w1.norm() / area).ceil() as i64 + 1;
        let e1 = (radius * self.w2.norm() / area).ceil() as i64 + 1;
        let (c1, c2) = self.coordinates(-offset);
        let (c1, c2) = (c1.round() as i64, c2.round() as i64);
        (c1 - e1, c1 + e1, c2 - e2, c2 + e2)
    }

    /// Nonzero lattice points with r ≤ radius, sorted by (r, φ, p₁, p₂).
    pub fn points(&self, radius: f64) -> Vec<LatticePoint> {
        self.translated_points(Complex64::new(0.0, 0.0), radius)
    }

    /// Points offset + p₁w₁ + p₂w₂ with 0 < r ≤ radius, sorted by (r, φ, p₁, p₂).
    pub fn translated_points(&self, offset: Complex64, radius: f64) -> Vec<LatticePoint> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Vec::new();
        }
        let (l1, h1, l2, h2) = self.index_bounds(offset, radius);
        let mut found: Vec<(LatticePoint, i64, i64)> = Vec::new();
        for p2 in l2..=h2 {
            for p1 in l1..=h1 {
                let z = offset + self.point(p1, p2);
                let pt = LatticePoint::from_complex(z);
                if pt.r > 0.0 && pt.r <= radius {
                    found.push((pt, p1, p2));
                }
            }
        }
        found.sort_by(|a, b| point_order(&a.0, &b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        found.into_iter().map(|(p, _, _)| p).collect()
    }
}

fn point_order(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    a.r.total_cmp(&b.r).then(a.phi.total_cmp(&b.phi))
}

/// Every nonzero point of Ω(τ, a) with r ≤ radius, sorted by r then φ.
pub fn direct_points(spec: &LatticeSpec, radius: f64) -> Vec<LatticePoint> {
    spec.direct_basis().points(radius)
}

/// Every nonzero point of Ω̄(τ, a) with r ≤ radius, sorted by r then φ.
pub fn reciprocal_points(spec: &LatticeSpec, radius: f64) -> Vec<LatticePoint> {
    spec.reciprocal_basis().points(radius)
}

/// Outer row indices 0, 1, −1, 2, −2, …, ±extent.
pub fn row_indices(extent: usize) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=extent as i64).flat_map(|k| [k, -k]))
}

/// Points p₁ + τp₂ (unit scale) in Eisenstein order: for each p₂ in
/// 0, ±1, …, ±P2 every p₁ in −P1…P1, origin skipped.
pub fn eisenstein_ordered_rows(spec: &LatticeSpec, p1_extent: usize, p2_extent: usize) -> impl Iterator<Item = LatticePoint> {
    let tau = spec.tau();
    let e1 = p1_extent as i64;
    row_indices(p2_extent).flat_map(move |p2| {
        (-e1..=e1).filter_map(move |p1| {
            if p1 == 0 && p2 == 0 {
                None
            } else {
                Some(LatticePoint::from_complex(Complex64::new(p1 as f64, 0.0) + tau * p2 as f64))
            }
        })
    })
}

/// One modular move applied during reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMove {
    /// τ → τ + k
    T(i64),
    /// τ → −1/τ
    S,
}

impl TauMove {
    pub fn apply(self, tau: Complex64) -> Complex64 {
        match self {
            TauMove::T(k) => tau + k as f64,
            TauMove::S => -tau.inv(),
        }
    }
}

/// Result of [`reduce_tau`]: the reduced τ′ and the moves taking τ to τ′.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub tau: Complex64,
    pub moves: Vec<TauMove>,
}

impl Reduction {
    /// The sequence τ₀, τ₁, …, τ_k visited by the moves, τ_k = τ′.
    pub fn path(&self, start: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let mut t = start;
        out.push(t);
        for mv in &self.moves {
            t = mv.apply(t);
            out.push(t);
        }
        out
    }
}

/// Reduce τ to |Re τ′| ≤ 1/2, |τ′| ≥ 1 recording the T and S moves used.
pub fn reduce_tau(tau: Complex64) -> Result<Reduction> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::InvalidTau(tau));
    }
    let mut t = tau;
    let mut moves = Vec::new();
    loop {
        if t.re.abs() > 0.5 + DOMAIN_SLACK {
            let k = -t.re.round() as i64;
            moves.push(TauMove::T(k));
            t = TauMove::T(k).apply(t);
        } else if t.norm_sqr() < 1.0 - DOMAIN_SLACK {
            moves.push(TauMove::S);
            t = TauMove::S.apply(t);
        } else {
            return Ok(Reduction { tau: t, moves });
        }
        if moves.len() > REDUCTION_LIMIT {
            return Err(Error::ReductionLimit(REDUCTION_LIMIT));
        }
    }
}
