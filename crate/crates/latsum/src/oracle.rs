//! Brute-force reference sums over finite point sets, with tail bounds.
//!
//! Every sum runs over fixed-size chunks in parallel; chunks are summed with
//! compensation and combined in chunk order, so results do not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::displaced::{DisplacedSet, LatticeCombination};
use crate::error::{Error, Result};
use crate::lattice::{row_indices, Basis, LatticePoint, LatticeSpec};
use crate::special::{dirichlet_beta, dirichlet_g, zeta, CompensatedSum};

/// Points per parallel chunk.
pub const CHUNK: usize = 4096;

/// A finite, possibly signed, point multiset cut at |z| ≤ radius.
#[derive(Debug, Clone)]
pub struct PointStream {
    points: Vec<(f64, LatticePoint)>,
    radius: f64,
    /// Σ|w|/cell area over the underlying lattices.
    density: f64,
    /// Largest distance from any point of the plane to its nearest lattice point.
    cover: f64,
}

impl PointStream {
    fn from_bases(parts: &[(f64, Basis, Complex64)], radius: f64) -> Self {
        let mut points = Vec::new();
        let (mut density, mut cover) = (0.0, 0.0f64);
        for &(w, b, offset) in parts {
            points.extend(b.translated_points(offset, radius).into_iter().map(|p| (w, p)));
            density += w.abs() / b.area();
            cover = cover.max(b.half_diagonal());
        }
        Self { points, radius, density, cover }
    }

    /// Nonzero points of Ω(τ, a).
    pub fn direct(spec: &LatticeSpec, radius: f64) -> Self {
        Self::from_bases(&[(1.0, spec.direct_basis(), Complex64::new(0.0, 0.0))], radius)
    }

    /// Nonzero points of Ω̄(τ, a).
    pub fn reciprocal(spec: &LatticeSpec, radius: f64) -> Self {
        Self::from_bases(&[(1.0, spec.reciprocal_basis(), Complex64::new(0.0, 0.0))], radius)
    }

    /// A displaced set enumerated from its own translates, independent of
    /// any multiset identity.
    pub fn displaced(set: DisplacedSet, a: f64, radius: f64) -> Result<Self> {
        let (basis, offsets) = set.translates(a)?;
        let parts: Vec<_> = offsets.into_iter().map(|o| (1.0, basis, o)).collect();
        Ok(Self::from_bases(&parts, radius))
    }

    /// The signed points of a combination.
    pub fn combination(comb: &LatticeCombination, radius: f64) -> Self {
        let mut s = Self { points: Vec::new(), radius, density: 0.0, cover: 0.0 };
        for (w, p) in comb.points(radius) {
            s.points.push((w as f64, p));
        }
        for t in &comb.terms {
            let b = match comb.kind {
                crate::displaced::SumKind::Direct => t.spec.direct_basis(),
                crate::displaced::SumKind::Reciprocal => t.spec.reciprocal_basis(),
            };
            s.density += (t.weight as f64).abs() / b.area();
            s.cover = s.cover.max(b.half_diagonal());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[(f64, LatticePoint)] {
        &self.points
    }

    /// Bound on Σ_{|z|>R} |z|^{−s} over the underlying lattices, s > 2.
    pub fn power_tail(&self, s: f64) -> f64 {
        let r0 = self.radius - 2.0 * self.cover;
        if !(s > 2.0) || !(r0 > 0.0) {
            return f64::INFINITY;
        }
        // each point beyond R owns a cell outside R − h, and |z| ≥ |x| − h on it
        2.0 * PI * self.density * (r0.powf(2.0 - s) / (s - 2.0) + self.cover * r0.powf(1.0 - s) / (s - 1.0))
    }
}

/// What a tail estimate means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// Upper bound of the discarded absolute tail.
    Bound,
    /// Change over the last doubling of the truncation; a trend only.
    Trend,
    /// Nothing was summed.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Radius(f64),
    Rows { p1: usize, p2: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub value: Complex64,
    pub truncation: Truncation,
    pub tail_estimate: f64,
    pub tail_model: TailModel,
    pub terms_used: usize,
}

fn chunked_sum<T: Sync>(items: &[T], f: impl Fn(&T) -> Complex64 + Sync) -> Complex64 {
    let partials: Vec<CompensatedSum> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut s = CompensatedSum::new();
            for it in chunk {
                s.add(f(it));
            }
            s
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partials {
        total.add(p.value());
    }
    total.value()
}

/// e^{−imφ}/rⁿ for a point.
fn sigma_term(p: &LatticePoint, n: u32, m: i32) -> Complex64 {
    Complex64::from_polar(p.r.powi(-(n as i32)), -(m as f64) * p.phi)
}

/// Σ w e^{−imφ}/rⁿ over the stream.
pub fn sigma_direct(points: &PointStream, n: u32, m: i32) -> OracleReport {
    let truncation = Truncation::Radius(points.radius);
    if points.is_empty() {
        return OracleReport { value: Complex64::new(0.0, 0.0), truncation, tail_estimate: f64::INFINITY, tail_model: TailModel::Empty, terms_used: 0 };
    }
    let value = chunked_sum(&points.points, |(w, p)| *w * sigma_term(p, n, m));
    let (tail_estimate, tail_model) = if n > 2 { (points.power_tail(n as f64), TailModel::Bound) } else { (f64::INFINITY, TailModel::Trend) };
    OracleReport { value, truncation, tail_estimate, tail_model, terms_used: points.len() }
}

/// Which index runs in the inner sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationOrder {
    /// Inner p₁, outer p₂.
    Eisenstein,
    /// Inner p₂, outer p₁.
    Swapped,
}

/// e^{−imφ}/rⁿ = z̄ᵐ/|z|^{m+n} without trigonometry.
fn lattice_term(z: Complex64, n: u32, m: i32) -> Complex64 {
    let r2 = z.norm_sqr();
    let w = if m >= 0 { z.conj().powi(m) } else { z.powi(-m) };
    w / r2.powf(0.5 * (m.unsigned_abs() + n) as f64)
}

fn ordered_sum(tau: Complex64, n: u32, m: i32, inner: usize, outer: usize, order: SummationOrder) -> Complex64 {
    let outer_idx: Vec<i64> = row_indices(outer).collect();
    let e = inner as i64;
    let rows: Vec<CompensatedSum> = outer_idx
        .par_iter()
        .map(|&k| {
            let mut s = CompensatedSum::new();
            for j in -e..=e {
                let (p1, p2) = match order {
                    SummationOrder::Eisenstein => (j, k),
                    SummationOrder::Swapped => (k, j),
                };
                if p1 == 0 && p2 == 0 {
                    continue;
                }
                s.add(lattice_term(Complex64::new(p1 as f64, 0.0) + tau * p2 as f64, n, m));
            }
            s
        })
        .collect();
    let mut total = CompensatedSum::new();
    for r in rows {
        total.add(r.value());
    }
    total.value()
}

/// Partial sum of Σ e^{−imφ}/rⁿ over p₁ + p₂τ with |p₁| ≤ P1, |p₂| ≤ P2.
/// Rows (fixed outer index) are completed in the order 0, 1, −1, 2, … of
/// [`crate::lattice::eisenstein_ordered_rows`]. The tail estimate is the change from the
/// half-size sum and is a trend only.
pub fn sigma_eisenstein_order(tau: Complex64, n: u32, m: i32, p1: usize, p2: usize, order: SummationOrder) -> Result<OracleReport> {
    LatticeSpec::new(tau, 1.0)?;
    let (inner, outer) = match order {
        SummationOrder::Eisenstein => (p1, p2),
        SummationOrder::Swapped => (p2, p1),
    };
    let value = ordered_sum(tau, n, m, inner, outer, order);
    let half = ordered_sum(tau, n, m, inner / 2, outer / 2, order);
    Ok(OracleReport {
        value,
        truncation: Truncation::Rows { p1, p2 },
        tail_estimate: (value - half).norm(),
        tail_model: TailModel::Trend,
        terms_used: (2 * p1 + 1) * (2 * p2 + 1) - 1,
    })
}

/// Σ w J_l(Ku) e^{imψ}/Kⁿ over the stream, with the tail bounded through
/// |J_l(x)| ≤ √(2/(πx)).
#[allow(non_snake_case)]
pub fn S_direct(points: &PointStream, l: u32, m: i32, n: u32, u: f64) -> Result<OracleReport> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument(format!("u = {u} must be positive")));
    }
    let truncation = Truncation::Radius(points.radius);
    if points.is_empty() {
        return Ok(OracleReport { value: Complex64::new(0.0, 0.0), truncation, tail_estimate: f64::INFINITY, tail_model: TailModel::Empty, terms_used: 0 });
    }
    let value = chunked_sum(&points.points, |(w, p)| {
        *w * bessel_j(l, p.r * u) * Complex64::from_polar(p.r.powi(-(n as i32)), m as f64 * p.phi)
    });
    let tail = (2.0 / (PI * u)).sqrt() * points.power_tail(n as f64 + 0.5);
    Ok(OracleReport { value, truncation, tail_estimate: tail, tail_model: TailModel::Bound, terms_used: points.len() })
}

fn bessel_series(l: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = (1..=l).fold(1.0, |acc, k| acc * h / k as f64);
    let mut sum = term;
    let q = -h * h;
    for k in 1..200 {
        term *= q / (k as f64 * (k + l) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_asymptotic(l: u32, x: f64) -> f64 {
    let mu = 4.0 * (l as f64).powi(2);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = (2 * k - 1) as f64;
        term *= (mu - kf * kf) / (k as f64 * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // odd k feed Q, even k feed P, with alternating signs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * l as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn bessel_miller(l: u32, x: f64) -> f64 {
    let start = ((x + 30.0 + 5.0 * x.sqrt()) as u32 + l + 10) & !1;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut want = 0.0;
    for k in (0..=start).rev() {
        if k == l {
            want = cur;
        }
        if k == 0 {
            norm += cur;
        } else if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        if k == 0 {
            break;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    want / norm
}

/// Bessel function of the first kind J_l(x) for x ≥ 0.
pub fn bessel_j(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let x = x.abs();
    if x < 1.0 {
        bessel_series(l, x)
    } else if x > 25.0 + 0.5 * (l * l) as f64 {
        bessel_asymptotic(l, x)
    } else {
        bessel_miller(l, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletConstants {
    pub zeta: f64,
    pub beta: f64,
    pub g: f64,
}

/// ζ(s), β(s) and the mod-3 character L-value g(s).
pub fn dirichlet_constants(s: u32) -> Result<DirichletConstants> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("s = {s} must be >= 2")));
    }
    Ok(DirichletConstants { zeta: zeta(s), beta: dirichlet_beta(s), g: dirichlet_g(s) })
}
