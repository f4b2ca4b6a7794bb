//! Scalar special functions and exact-arithmetic helpers: Bernoulli numbers,
//! the Riemann zeta function at integers, Dirichlet L-series for the two
//! characters that appear in square and hexagonal lattice sums, and a
//! compensated accumulator.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Odd zeta values ζ(3), ζ(5), …, ζ(29).
const ZETA_ODD: [&str; 14] = [
    "1.20205690315959428539973816151",
    "1.03692775514336992633136548646",
    "1.00834927738192282683979754985",
    "1.00200839282608221441785276923",
    "1.00049418860411946455870228253",
    "1.00012271334757848914675183653",
    "1.00003058823630702049355172851",
    "1.00000763719763789976227360029",
    "1.00000190821271655393892565696",
    "1.00000047693298678780646311672",
    "1.00000011921992596531107306779",
    "1.00000002980350351465228018606",
    "1.00000000745071178983542949198",
    "1.00000000186265972351304900640",
];

/// Neumaier-compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Exact n!.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact binomial coefficient for integer n ≥ 0; zero when k is out of range.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Generalised binomial coefficient binom(x, k) for rational x.
pub fn binomial_rational(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for j in 0..k {
        acc = acc * (x - BigRational::from_integer(BigInt::from(j))) / BigRational::from_integer(BigInt::from(j + 1));
    }
    acc
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Harmonic number H(s) = Σ_{t=1}^s 1/t, with H(s) = 0 for s ≤ 0.
pub fn harmonic(s: i64) -> BigRational {
    let mut acc = BigRational::zero();
    for t in 1..=s.max(0) {
        acc += rational(1, t);
    }
    acc
}

fn bernoulli_table() -> &'static Vec<BigRational> {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_1 = -1/2 convention; only even indices are used.
        let n_max = 160usize;
        let mut b: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        b.push(BigRational::one());
        for m in 1..=n_max {
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binomial(m as i64 + 1, k as i64)) * bk;
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Bernoulli number B_n (B_1 = −1/2) for n ≤ 160.
pub fn bernoulli(n: usize) -> Option<BigRational> {
    bernoulli_table().get(n).cloned()
}

/// ζ(n) for even n ≥ 2 from ζ(n) = |B_n|(2π)^n / (2·n!).
fn zeta_even(n: u32) -> f64 {
    if n > 60 {
        return dirichlet_series(n, 1, &[(1, 1.0)]);
    }
    let b = bernoulli(n as usize).expect("bernoulli table covers n <= 160").abs();
    let ratio = to_f64(&(b / BigRational::from_integer(factorial(n) * BigInt::from(2))));
    ratio * (2.0 * PI).powi(n as i32)
}

/// Riemann zeta ζ(s) at integer s ≥ 2.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta is only provided at integers s >= 2");
    if s.is_multiple_of(2) {
        zeta_even(s)
    } else if s <= 29 {
        ZETA_ODD[((s - 3) / 2) as usize].parse().expect("valid literal")
    } else {
        dirichlet_series(s, 1, &[(1, 1.0)])
    }
}

/// Dirichlet β(s) = Σ_{j≥0} (−1)^j (2j+1)^{−s}.
pub fn dirichlet_beta(s: u32) -> f64 {
    dirichlet_series(s, 4, &[(1, 1.0), (3, -1.0)])
}

/// g(s) = 1 − 2^{−s} + 4^{−s} − 5^{−s} + …, the L-series of the
/// non-principal character modulo 3.
pub fn dirichlet_g(s: u32) -> f64 {
    dirichlet_series(s, 3, &[(1, 1.0), (2, -1.0)])
}

/// Σ_{j≥0} Σ_r c_r (q j + r)^{−s} by Euler–Maclaurin summation of each
/// residue class: ten explicit terms, then the integral, the half end term and
/// twelve Bernoulli corrections.
pub fn dirichlet_series(s: u32, q: u32, classes: &[(u32, f64)]) -> f64 {
    const N: u32 = 10;
    const K: usize = 12;
    let sf = s as f64;
    let qf = q as f64;
    let mut total = 0.0;
    for &(r, c) in classes {
        let f = |j: f64| (qf * j + r as f64).powf(-sf);
        // Explicit terms summed smallest first.
        let mut head = 0.0;
        for j in (0..N).rev() {
            head += f(j as f64);
        }
        let x0 = qf * N as f64 + r as f64;
        let mut tail = x0.powf(1.0 - sf) / (qf * (sf - 1.0)) + 0.5 * x0.powf(-sf);
        // f^{(p)}(N) = (−s)(−s−1)…(−s−p+1) q^p x0^{−s−p}
        for k in 1..=K {
            let p = 2 * k - 1;
            let mut fall = 1.0;
            for t in 0..p {
                fall *= -sf - t as f64;
            }
            let deriv = fall * qf.powi(p as i32) * x0.powf(-sf - p as f64);
            let b2k = to_f64(&bernoulli(2 * k).expect("table")) / to_f64(&BigRational::from_integer(factorial(2 * k as u32)));
            tail -= b2k * deriv;
        }
        total += c * (head + tail);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_low_orders() {
        assert_eq!(bernoulli(2).unwrap(), rational(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rational(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rational(-691, 2730));
    }

    #[test]
    fn zeta_even_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(6) - PI.powi(6) / 945.0).abs() < 1e-15);
    }

    #[test]
    fn euler_maclaurin_reproduces_tabulated_odd_zeta() {
        for s in [3u32, 5, 7, 11, 29] {
            let em = dirichlet_series(s, 1, &[(1, 1.0)]);
            assert!((em - zeta(s)).abs() < 2e-16 * zeta(s), "s = {s}");
        }
    }

    #[test]
    fn catalan_and_g2() {
        assert!((dirichlet_beta(2) - 0.915_965_594_177_219).abs() < 2e-16);
        assert!((dirichlet_g(2) - 0.781_302_412_896_486_3).abs() < 2e-16);
        // β(1) would be π/4 but s = 1 is outside the Euler–Maclaurin tail; β(3) = π³/32.
        assert!((dirichlet_beta(3) - PI.powi(3) / 32.0).abs() < 1e-15);
    }

    #[test]
    fn binomials_and_harmonics() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial_rational(&rational(1, 2), 2), rational(-1, 8));
        assert_eq!(harmonic(3), rational(11, 6));
        assert_eq!(harmonic(0), BigRational::zero());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(Complex64::new(1.0, 0.0));
        for _ in 0..1000 {
            s.add(Complex64::new(1e-17, 0.0));
        }
        s.add(Complex64::new(-1.0, 0.0));
        assert!((s.value().re - 1e-14).abs() < 1e-20);
    }
}
