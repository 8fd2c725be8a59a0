//! Upper bounds for the number of rational places: Hasse–Weil, Serre, Oesterlé, and the
//! resulting bound on `S`-class numbers.
//!
//! `theta` is computed by bisection in floating point, while `theta_inv` evaluates the
//! exact `Q(sqrt q)`-rational closed form on each branch. The two are independent and
//! are checked against each other on every call of `theta_inv`.

mod qsqrt;

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use qsqrt::{exact_sqrt, QSqrtNum};

const BRANCH_GUARD: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("closed form {closed} and bisection {bisected} disagree at t = {t}")]
    BranchMismatch { t: f64, closed: f64, bisected: f64 },
}

/// `floor(q + 1 + 2 g sqrt q)`, computed with integers only.
pub fn hasse_weil(q: u64, g: u64) -> u64 {
    q + 1 + (4 * g * g * q).sqrt()
}

/// `q + 1 + g floor(2 sqrt q)`.
pub fn serre_bound(q: u64, g: u64) -> u64 {
    q + 1 + g * (4 * q).sqrt()
}

/// Whether a maximal function field of genus `g` over `F_q` can exist at all.
pub fn maximality_admissible(q: u64, g: u64) -> bool {
    if g == 0 {
        return true;
    }
    match exact_sqrt(q) {
        None => false,
        Some(s) => 2 * g == q - s || 4 * g <= (s - 1) * (s - 1),
    }
}

/// Branch index `m >= 2` with `q^{m/2} <= x < q^{(m+1)/2}`, for `x >= q`.
fn branch_for_count(q: f64, x: f64) -> u32 {
    let mut m = 2u32;
    while q.powf((m + 1) as f64 / 2.0) <= x {
        m += 1;
    }
    m
}

/// `theta_q(N)`, the increasing bijection `[q+1, inf) -> [0, 1)`.
pub fn theta(q: u64, n: f64) -> Result<f64, BoundsError> {
    let qf = q as f64;
    if n.is_nan() || n < qf + 1.0 {
        return Err(BoundsError::DomainError(format!("theta needs N >= q+1, got {n}")));
    }
    let m = branch_for_count(qf, n - 1.0);
    let sq = qf.sqrt();
    let lo_pow = qf.powf((m as f64 - 1.0) / 2.0);
    let hi_pow = qf.powf((m as f64 + 1.0) / 2.0);
    let u = ((hi_pow - lo_pow) / (n - 1.0 - lo_pow) - 1.0) / sq;
    let u = u.clamp(0.0, 1.0);
    let mf = m as f64;
    let f = |phi: f64| -((mf + 1.0) / 2.0 * phi).cos() / ((mf - 1.0) / 2.0 * phi).cos();
    // f is increasing on [pi/(m+1), pi/m] from 0 to 1
    let (mut lo, mut hi) = (PI / (mf + 1.0), PI / mf);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).cos())
}

/// Exact evaluation of `sum_{i=0}^{floor(n/2)} n/(n-i) C(n-i, i) (-2t-2)^{floor(n/2)-i}`.
pub fn f_poly(n: u32, t: &QSqrtNum) -> QSqrtNum {
    assert!(n >= 1, "f_n is defined for n >= 1");
    let q = t.radicand();
    let half = n / 2;
    let base = QSqrtNum::from_int(-2, q) * t.clone() + QSqrtNum::from_int(-2, q);
    // Horner in base, highest power first (i = 0 carries base^half)
    let mut acc = QSqrtNum::from_int(0, q);
    for i in 0..=half {
        let c = f_coefficient(n, i);
        acc = acc * base.clone()
            + QSqrtNum::from_rational(BigRational::from_integer(c), q);
    }
    acc
}

/// `n/(n-i) * C(n-i, i)`; always an integer.
pub fn f_coefficient(n: u32, i: u32) -> BigInt {
    let k = n - i;
    let mut binom = BigInt::from(1);
    for j in 0..i {
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    let num = binom * BigInt::from(n);
    let den = BigInt::from(k);
    debug_assert!((&num % &den).is_zero());
    num / den
}

fn theta_inv_branch(q: u64, t: &QSqrtNum, m: u32) -> QSqrtNum {
    let u = f_poly(m + 1, t) / f_poly(m - 1, t);
    let sq = QSqrtNum::sqrt_q(q);
    // q^{k/2} as an exact element
    let half_pow = |k: u32| sq.pow(k);
    let num = half_pow(m + 1) + half_pow(m) * u.clone();
    let den = QSqrtNum::from_int(1, q) + sq * u;
    QSqrtNum::from_int(1, q) + num / den
}

/// Exact `theta_q^{-1}(t)` for `0 <= t < 1`.
pub fn theta_inv(q: u64, t: &QSqrtNum) -> Result<QSqrtNum, BoundsError> {
    assert_eq!(t.radicand(), q, "argument must live in Q(sqrt q)");
    if t.cmp_int(0) == Ordering::Less || t.cmp_int(1) != Ordering::Less {
        return Err(BoundsError::DomainError(format!("theta_inv needs 0 <= t < 1, got {t}")));
    }
    let tf = t.to_f64();
    // smallest m >= 2 with t <= cos(pi/(m+1))
    let mut m = 2u32;
    while tf > (PI / (m as f64 + 1.0)).cos() + BRANCH_GUARD {
        m += 1;
    }
    let mut value = theta_inv_branch(q, t, m);
    let upper = (PI / (m as f64 + 1.0)).cos();
    if (tf - upper).abs() < BRANCH_GUARD {
        let other = theta_inv_branch(q, t, m + 1);
        let (a, b) = (value.to_f64(), other.to_f64());
        if (a - b).abs() > ROUND_TRIP_TOL * a.abs().max(1.0) {
            return Err(BoundsError::BranchMismatch { t: tf, closed: a, bisected: b });
        }
        // keep the branch on whose side t actually lies
        if tf > upper {
            value = other;
        }
    }
    let v = value.to_f64();
    let back = theta(q, v.max(q as f64 + 1.0))?;
    if (back - tf).abs() > ROUND_TRIP_TOL {
        return Err(BoundsError::BranchMismatch { t: tf, closed: v, bisected: back });
    }
    Ok(value)
}

/// Oesterlé's lower bound `g_q(N)` on the genus, in floating point.
pub fn g_q(q: u64, n: f64) -> Result<f64, BoundsError> {
    let th = theta(q, n)?;
    let s = (q as f64).sqrt();
    Ok(1.0 + (s * th - 1.0) * n / (q as f64 - 2.0 * s * th + 1.0))
}

/// The `t` with `g_q(N) <= g  <=>  N <= theta_q^{-1}(t)` (when `t < 1`).
fn genus_threshold(q: u64, g: u64, n: u64) -> QSqrtNum {
    let gm1 = g as i64 - 1;
    let num = n as i64 + gm1 * (q as i64 + 1);
    let den = (n as i64 + 2 * g as i64 - 2) * q as i64;
    QSqrtNum::new(BigRational::zero(), BigRational::new(num.into(), den.into()), q)
}

fn genus_allows(q: u64, g: u64, n: u64) -> Result<bool, BoundsError> {
    let t = genus_threshold(q, g, n);
    if t.cmp_int(1) != Ordering::Less {
        return Ok(true);
    }
    if t.cmp_int(0) == Ordering::Less {
        return Ok(false);
    }
    let limit = theta_inv(q, &t)?;
    Ok(limit.cmp_int(n as i64) != Ordering::Less)
}

/// The Oesterlé bound: the largest integer `N` with `g_q(N) <= g`.
pub fn oesterle_nbar(q: u64, g: u64) -> u64 {
    let (mut lo, mut hi) = (q + 1, hasse_weil(q, g) + 1);
    // invariant: allowed(lo), and either hi is not allowed or hi is the search cap
    if genus_allows(q, g, hi).unwrap_or(false) {
        return hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if genus_allows(q, g, mid).expect("threshold lies in [0, 1)") {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Upper bound `theta_q^{-1}(t)/N` for the `S`-class number when `S` holds `N` rational
/// places of a genus `g` field.
pub fn hbar(q: u64, g: u64, n: u64) -> Result<QSqrtNum, BoundsError> {
    if g < 1 || n < 1 {
        return Err(BoundsError::DomainError("hbar needs g >= 1 and N >= 1".into()));
    }
    // N > (sqrt q - 1)(g - 1)
    let rhs = (QSqrtNum::sqrt_q(q) - QSqrtNum::from_int(1, q))
        * QSqrtNum::from_int(g as i64 - 1, q);
    if QSqrtNum::from_int(n as i64, q) <= rhs {
        return Err(BoundsError::DomainError(format!(
            "hbar needs N > (sqrt q - 1)(g - 1); got q={q}, g={g}, N={n}"
        )));
    }
    let t = genus_threshold(q, g, n);
    Ok(theta_inv(q, &t)? / QSqrtNum::from_int(n as i64, q))
}

/// Integer part of [`hbar`]: the largest `S`-class number it allows.
pub fn hbar_floor(q: u64, g: u64, n: u64) -> Result<u64, BoundsError> {
    Ok(hbar(q, g, n)?.floor().to_u64().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub g: u64,
    pub hasse_weil: u64,
    pub serre: u64,
    pub oesterle: u64,
    pub maximal_admissible: bool,
}

impl BoundReport {
    pub fn new(q: u64, g: u64) -> Self {
        BoundReport {
            q,
            g,
            hasse_weil: hasse_weil(q, g),
            serre: serre_bound(q, g),
            oesterle: oesterle_nbar(q, g),
            maximal_admissible: maximality_admissible(q, g),
        }
    }

    /// Smallest of the three bounds.
    pub fn best(&self) -> u64 {
        self.hasse_weil.min(self.serre).min(self.oesterle)
    }
}
