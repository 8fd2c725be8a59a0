//! S-descriptions at a rational place of an arbitrary curve.
//!
//! A one-unit is factored greedily as a product of `(1 + beta pi^j)^{m_{j beta}}` with
//! `j` prime to `p` and `beta` in the power basis of `F_q`; the exponents are integers
//! modulo `p^{round(n, j)}`. Elimination on the exponent vectors of a basis of `U_S`
//! yields the description `delta_S`.
//!
//! # Units file format
//!
//! ```text
//! factor x    x                 # name, then a polynomial in x and y
//! factor w    y + x^2
//! unit   y1   13 -2             # exponents, one per factor in declaration order
//! ```

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{BiPoly, CurveError, PlaceSpec, PlaneCurve, EXPANSION_CAP};
use crate::ffield::{FieldCtx, Fq};
use crate::lambda::{p_free_part, p_valuation, Description, LambdaSeq, LambdaSource};
use crate::series::Series;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MethodBError {
    #[error("the series is not congruent to 1 modulo pi")]
    NotAOneUnit,
    #[error("the exponent vectors are dependent at truncation {0}; raise the precision")]
    PrecisionExceeded(usize),
    #[error("the units stay dependent up to truncation {0}; they are not a basis of U_S")]
    DependentRows(usize),
    #[error("unit {name} has valuation {valuation} at the chosen place")]
    NotAUnitAtPlace { name: String, valuation: i64 },
    #[error("units file line {line}: {msg}")]
    UnitsParse { line: usize, msg: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `ceil(log_p(n / j))` for `j < n`, and 0 for `j >= n`.
pub fn round_exp(n: u64, j: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut x = j;
    while x < n {
        x *= p;
        k += 1;
    }
    k
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible modulo {m}");
    s0.rem_euclid(m as i128) as u64
}

/// Image of a one-unit in `prod_j (Z / p^{round(n, j)})^B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneUnitVec {
    p: u32,
    e: u32,
    n: usize,
    /// The `j < n` prime to `p`, increasing.
    js: Vec<u32>,
    /// `round(n, j)` for each entry of `js`.
    digits: Vec<u32>,
    /// `m_{j beta}`, row-major in `(j, beta)`, reduced into `[0, p^{round(n, j)})`.
    m: Vec<u64>,
}

impl OneUnitVec {
    pub fn zero(p: u32, e: u32, n: usize) -> Self {
        let js: Vec<u32> = (1..n as u32).filter(|j| j % p != 0).collect();
        let digits = js.iter().map(|&j| round_exp(n as u64, u64::from(j), u64::from(p))).collect();
        let m = vec![0; js.len() * e as usize];
        OneUnitVec { p, e, n, js, digits, m }
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn js(&self) -> &[u32] {
        &self.js
    }

    fn modulus(&self, idx: usize) -> u64 {
        u64::from(self.p).pow(self.digits[idx])
    }

    fn slot(&self, j: u32) -> Option<usize> {
        self.js.binary_search(&j).ok()
    }

    /// `m_{j beta}`, or 0 where `j` is divisible by `p` or not below `n`.
    pub fn get(&self, j: u32, beta: usize) -> u64 {
        self.slot(j).map_or(0, |i| self.m[i * self.e as usize + beta])
    }

    /// Coordinates as `(j, beta, m, modulus)`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, usize, u64, u64)> + '_ {
        let e = self.e as usize;
        self.m.iter().enumerate().map(move |(k, &v)| (self.js[k / e], k % e, v, self.modulus(k / e)))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|&v| v == 0)
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Self, k: i64) -> Self {
        assert_eq!((self.p, self.e, self.n), (other.p, other.e, other.n));
        let e = self.e as usize;
        let mut out = self.clone();
        for (idx, v) in out.m.iter_mut().enumerate() {
            let md = i128::from(self.modulus(idx / e));
            let w = i128::from(*v) + i128::from(k) * i128::from(other.m[idx]);
            *v = w.rem_euclid(md) as u64;
        }
        out
    }

    /// `min j p^{v_p(m_{j beta})}` over nonzero coordinates; `None` if all vanish.
    pub fn nu(&self) -> Option<u64> {
        let p = u64::from(self.p);
        self.entries()
            .filter(|&(_, _, v, _)| v != 0)
            .map(|(j, _, v, _)| u64::from(j) * p.pow(p_valuation(v, p)))
            .min()
    }

    /// `prod (1 + beta pi^j)^{m_{j beta}}` modulo `pi^n`.
    pub fn reconstruct(&self, f: &FieldCtx) -> Series {
        let mut s = Series::one(self.n);
        let p = u64::from(self.p);
        for (j, beta, mut v, _) in self.entries() {
            let mut b = basis_element(f, beta);
            let mut k = j as usize;
            while v > 0 {
                for _ in 0..v % p {
                    s.mul_binomial(f, b, k);
                }
                v /= p;
                b = f.frobenius(b);
                k *= self.p as usize;
            }
        }
        s
    }
}

impl fmt::Display for OneUnitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn basis_element(f: &FieldCtx, beta: usize) -> Fq {
    let mut c = vec![0u32; f.e() as usize];
    c[beta] = 1;
    f.from_coords(&c)
}

/// Inverse of an invertible matrix over `F_p`.
fn invert_fp(mut a: Vec<Vec<u32>>, p: u32) -> Vec<Vec<u32>> {
    let n = a.len();
    let mut inv: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("matrix is invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = inverse_mod(u64::from(a[col][col]), u64::from(p)) as u32;
        for k in 0..n {
            a[col][k] = a[col][k] * s % p;
            inv[col][k] = inv[col][k] * s % p;
        }
        for r in 0..n {
            let c = a[r][col];
            if r != col && c != 0 {
                for k in 0..n {
                    a[r][k] = (a[r][k] + (p - c) * a[col][k]) % p;
                    inv[r][k] = (inv[r][k] + (p - c) * inv[col][k]) % p;
                }
            }
        }
    }
    inv
}

/// Reads coefficients in the bases `{beta^{p^s}}`, one per Frobenius power `s mod e`.
struct TwistedBases {
    /// `inverses[s][i][k]`: coordinate `i` of the basis-`s` expansion of coordinate vector `k`.
    inverses: Vec<Vec<Vec<u32>>>,
}

impl TwistedBases {
    fn new(f: &FieldCtx) -> Self {
        let e = f.e() as usize;
        let basis: Vec<Fq> = (0..e).map(|b| basis_element(f, b)).collect();
        let inverses = (0..e)
            .map(|s| {
                let twisted: Vec<Vec<u32>> = basis
                    .iter()
                    .map(|&b| {
                        let mut t = b;
                        for _ in 0..s {
                            t = f.frobenius(t);
                        }
                        f.coords(t)
                    })
                    .collect();
                // columns are the twisted basis vectors
                let m: Vec<Vec<u32>> = (0..e).map(|r| (0..e).map(|c| twisted[c][r]).collect()).collect();
                invert_fp(m, f.p())
            })
            .collect();
        TwistedBases { inverses }
    }

    fn decompose(&self, f: &FieldCtx, c: Fq, s: usize) -> Vec<u32> {
        let inv = &self.inverses[s % self.inverses.len()];
        let v = f.coords(c);
        inv.iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<u32>() % f.p())
            .collect()
    }
}

/// `mu^(n)` of a series with constant term 1.
pub fn mu_n(f: &FieldCtx, unit: &Series, n: usize) -> Result<OneUnitVec, MethodBError> {
    if unit.coeff(0) != Fq::ONE {
        return Err(MethodBError::NotAOneUnit);
    }
    assert!(unit.prec() >= n, "series known only to {} < {n}", unit.prec());
    let (p, e) = (f.p(), f.e());
    let bases = TwistedBases::new(f);
    let mut out = OneUnitVec::zero(p, e, n);
    let mut c = unit.truncate(n);
    for k in 1..n {
        let ck = c.coeff(k);
        if ck.is_zero() {
            continue;
        }
        let s = p_valuation(k as u64, u64::from(p));
        let j = p_free_part(k as u64, u64::from(p)) as u32;
        let a = bases.decompose(f, ck, s as usize);
        let slot = out.slot(j).expect("j is prime to p and below n");
        let pow = u64::from(p).pow(s);
        for (beta, &ab) in a.iter().enumerate() {
            if ab == 0 {
                continue;
            }
            let mut g = basis_element(f, beta);
            for _ in 0..s {
                g = f.frobenius(g);
            }
            for _ in 0..ab {
                c.div_binomial(f, g, k);
            }
            out.m[slot * e as usize + beta] += u64::from(ab) * pow;
        }
    }
    debug_assert!((1..n).all(|k| c.coeff(k).is_zero()));
    Ok(out)
}

/// `sum_k a_k v_k`.
pub fn combine(vectors: &[OneUnitVec], exponents: &[i64]) -> OneUnitVec {
    let first = &vectors[0];
    let mut acc = OneUnitVec::zero(first.p, first.e, first.n);
    for (v, &a) in vectors.iter().zip(exponents) {
        acc = acc.add_scaled(v, a);
    }
    acc
}

/// Eliminates on `rows` and returns `{n_1 <= ... <= n_r}`.
pub fn describe(rows: &[OneUnitVec]) -> Result<Description, MethodBError> {
    let Some(first) = rows.first() else {
        return Ok(Description::empty());
    };
    let (p, e, n) = (u64::from(first.p), first.e as usize, first.n);
    let mut live: Vec<OneUnitVec> = rows.to_vec();
    let mut found = Vec::with_capacity(rows.len());
    while !live.is_empty() {
        let nus: Vec<Option<u64>> = live.iter().map(OneUnitVec::nu).collect();
        if nus.iter().any(Option::is_none) {
            return Err(MethodBError::PrecisionExceeded(n));
        }
        let (pos, nu) = nus
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.expect("checked above")))
            .min_by_key(|&(i, v)| (v, i))
            .expect("nonempty");
        let pivot = live.remove(pos);
        let j1 = p_free_part(nu, p) as u32;
        let v = p_valuation(nu, p);
        let slot = pivot.slot(j1).expect("pivot index below n");
        let beta1 = (0..e)
            .find(|&b| {
                let m = pivot.m[slot * e + b];
                m != 0 && p_valuation(m, p) == v
            })
            .expect("nu is attained");
        let pv = p.pow(v);
        let modulus = pivot.modulus(slot) / pv;
        let unit_inv = inverse_mod(pivot.m[slot * e + beta1] / pv, modulus);
        for row in &mut live {
            let a = row.m[slot * e + beta1];
            if a == 0 {
                continue;
            }
            debug_assert_eq!(a % pv, 0, "pivot valuation is minimal");
            let c = ((u128::from(a / pv) * u128::from(unit_inv)) % u128::from(modulus)) as i64;
            *row = row.add_scaled(&pivot, -c);
        }
        found.push(nu as u32);
    }
    Ok(Description::new(found))
}

/// `lambda_S^(n)` for `n <= n_max` from a description.
pub fn lambda_seq_b(desc: &Description, p: u32, e: u32, n_max: usize) -> LambdaSeq {
    LambdaSeq::from_description(desc, p, e, n_max, LambdaSource::MethodB)
}

/// Named factors and the units built from them.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSystem {
    pub factors: Vec<(String, BiPoly)>,
    pub units: Vec<(String, Vec<i64>)>,
}

impl UnitSystem {
    pub fn parse(f: &FieldCtx, text: &str) -> Result<Self, MethodBError> {
        let mut factors = Vec::new();
        let mut units = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| MethodBError::UnitsParse { line: k + 1, msg };
            let mut parts = line.splitn(3, char::is_whitespace);
            let key = parts.next().unwrap_or("");
            let name = parts.next().ok_or_else(|| bad("missing name".into()))?.to_string();
            let rest = parts.next().unwrap_or("").trim();
            match key {
                "factor" => {
                    let poly = BiPoly::parse(f, rest).map_err(|e| bad(e.to_string()))?;
                    factors.push((name, poly));
                }
                "unit" => {
                    let exps: Vec<i64> = rest
                        .split_whitespace()
                        .map(|w| w.parse().map_err(|_| bad(format!("bad exponent {w:?}"))))
                        .collect::<Result<_, _>>()?;
                    if exps.len() != factors.len() {
                        return Err(bad(format!("{} exponents for {} factors", exps.len(), factors.len())));
                    }
                    units.push((name, exps));
                }
                other => return Err(bad(format!("unknown keyword {other:?}"))),
            }
        }
        Ok(UnitSystem { factors, units })
    }

    /// The first `r` units only.
    pub fn prefix(&self, r: usize) -> Self {
        UnitSystem { factors: self.factors.clone(), units: self.units[..r.min(self.units.len())].to_vec() }
    }
}

/// Output of [`describe_units`].
#[derive(Debug, Clone, Serialize)]
pub struct UnitDescription {
    pub description: Description,
    /// Truncation at which the elimination succeeded.
    pub truncation: usize,
    /// Valuation of each factor at the place.
    pub factor_valuations: Vec<i64>,
    /// `mu^(n)` of each factor after removing its leading term.
    pub factor_vectors: Vec<OneUnitVec>,
    pub unit_vectors: Vec<OneUnitVec>,
}

/// `mu^(n)` of `g / (c pi^v)`, the normalized unit part of `g`.
pub fn factor_vector(
    curve: &PlaneCurve,
    place: &PlaceSpec,
    g: &BiPoly,
    valuation: i64,
    n: usize,
) -> Result<OneUnitVec, MethodBError> {
    let f = curve.field();
    let one = BiPoly::constant(Fq::ONE);
    let series = curve.local_expand(place, g, &one, valuation + n as i64)?;
    let unit = series.unit().truncate(n);
    let lead = unit.coeff(0);
    let unit = unit.scale(f, f.inv(lead));
    mu_n(f, &unit, n)
}

/// Runs the elimination on the units of `system` at `place`, doubling the truncation
/// from `start` (default `4 r e + 8`) until it succeeds.
pub fn describe_units(
    curve: &PlaneCurve,
    place: &PlaceSpec,
    system: &UnitSystem,
    start: Option<usize>,
) -> Result<UnitDescription, MethodBError> {
    let f = curve.field();
    let one = BiPoly::constant(Fq::ONE);
    let vals: Vec<i64> = system
        .factors
        .iter()
        .map(|(_, g)| curve.valuation(place, g, &one))
        .collect::<Result<_, _>>()?;
    for (name, exps) in &system.units {
        let v: i64 = exps.iter().zip(&vals).map(|(a, b)| a * b).sum();
        if v != 0 {
            return Err(MethodBError::NotAUnitAtPlace { name: name.clone(), valuation: v });
        }
    }
    let r = system.units.len();
    let mut n = start.unwrap_or(4 * r * f.e() as usize + 8).max(2);
    loop {
        let factor_vectors: Vec<OneUnitVec> = system
            .factors
            .iter()
            .zip(&vals)
            .map(|((_, g), &v)| factor_vector(curve, place, g, v, n))
            .collect::<Result<_, _>>()?;
        let unit_vectors: Vec<OneUnitVec> =
            system.units.iter().map(|(_, exps)| combine(&factor_vectors, exps)).collect();
        match describe(&unit_vectors) {
            Ok(description) => {
                return Ok(UnitDescription {
                    description,
                    truncation: n,
                    factor_valuations: vals,
                    factor_vectors,
                    unit_vectors,
                })
            }
            Err(MethodBError::PrecisionExceeded(_)) if n < EXPANSION_CAP / 2 => n *= 2,
            Err(MethodBError::PrecisionExceeded(_)) => return Err(MethodBError::DependentRows(n)),
            Err(other) => return Err(other),
        }
    }
}

/// `mu^(n)(1 - alpha pi)` for every `alpha` in `F_q^*`, indexed by discrete log.
///
/// These generate `U_S` for `S` a set of finite rational places of `F_q(x)` and the
/// place at infinity with `pi = 1/x`.
pub fn linear_unit_vectors(f: &FieldCtx, n: usize) -> Vec<OneUnitVec> {
    (1..f.q())
        .map(|j| {
            let alpha = f.omega_pow(i64::from(j));
            let s = Series::from_coeffs(vec![Fq::ONE, f.neg(alpha)], n);
            mu_n(f, &s, n).expect("constant term is 1")
        })
        .collect()
}

/// Description of `S = {P_0} u {P_alpha : alpha = w^j, j in exponents}` at the pole of
/// `x` on `F_q(x)`, with `vectors` from [`linear_unit_vectors`].
pub fn rational_description(vectors: &[OneUnitVec], exponents: &[u32]) -> Result<Description, MethodBError> {
    let rows: Vec<OneUnitVec> = exponents.iter().map(|&j| vectors[j as usize - 1].clone()).collect();
    describe(&rows)
}

/// [`rational_description`] with the truncation raised until the elimination succeeds.
pub fn rational_description_adaptive(f: &FieldCtx, exponents: &[u32], start: usize) -> Result<Description, MethodBError> {
    let mut n = start.max(2);
    loop {
        let vectors = linear_unit_vectors(f, n);
        match rational_description(&vectors, exponents) {
            Err(MethodBError::PrecisionExceeded(_)) if n < EXPANSION_CAP => n *= 2,
            Err(MethodBError::PrecisionExceeded(_)) => return Err(MethodBError::DependentRows(n)),
            other => return other,
        }
    }
}
