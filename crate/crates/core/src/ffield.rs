//! Arithmetic in `F_q = F_p[t]/(f)` backed by full discrete-log tables.
//!
//! Elements are stored as their base-`p` encoding `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! where `c_i` are the coordinates in the power basis `1, t, ..., t^{e-1}` of the modulus.
//! The multiplicative group is generated by a fixed `omega`, chosen as the smallest
//! (by encoding) element of order `q - 1`, so every derived output is reproducible.

use std::fmt;

use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("modulus {0:?} is reducible over F_p")]
    Reducible(Vec<u32>),
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: u32, got: Vec<u32> },
    #[error("field order p^e exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("discrete logarithm of zero")]
    ZeroElement,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// An element of a finite field, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// Base-`p` encoding of the coordinate vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable description of `F_q`; cheap to share between threads.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    omega: Fq,
    // exp[i] = omega^i for 0 <= i < q - 1
    exp: Vec<u32>,
    // log[z] = i with omega^i = z, 0 <= i < q - 1; log[0] unused
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("omega", &self.omega)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, e)` if `q = p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p as u32, e))
}

// Dense polynomials over F_p, lowest coefficient first, used only while
// building the field.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv_lead = inv_mod(b[db], p);
        while r.len() > db {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * inv_lead as u64 % p as u64) as u32;
            for (i, &bi) in b.iter().enumerate() {
                let k = dr - db + i;
                r[k] = ((r[k] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        rem(&out, m, p)
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(a: u32, mut k: u32, p: u32) -> u32 {
        let mut base = a as u64 % p as u64;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            k >>= 1;
        }
        acc as u32
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
    /// digits of `k`.
    pub fn monic_from_index(k: u64, deg: u32, p: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(deg as usize + 1);
        let mut r = k;
        for _ in 0..deg {
            c.push((r % p as u64) as u32);
            r /= p as u64;
        }
        c.push(1);
        c
    }

    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = (f.len() - 1) as u32;
        if deg <= 1 {
            return deg == 1;
        }
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d);
            for k in 0..count {
                let g = monic_from_index(k, d, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldCtx {
    /// Builds `F_{p^e}`. Without an explicit modulus the lexicographically smallest monic
    /// irreducible of degree `e` is used (lower coefficients compared from `t^{e-1}` down).
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(e).ok_or(FieldError::TooLarge)?;
        if q64 > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge);
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p)
                {
                    return Err(FieldError::BadModulus { expected: e, got: m.to_vec() });
                }
                if !fp_poly::is_irreducible(m, p) {
                    return Err(FieldError::Reducible(m.to_vec()));
                }
                m.to_vec()
            }
            None => (0..(p as u64).pow(e))
                .map(|k| fp_poly::monic_from_index(k, e, p))
                .find(|f| fp_poly::is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists"),
        };

        let to_poly = |mut z: u32| -> Vec<u32> {
            let mut c = Vec::with_capacity(e as usize);
            for _ in 0..e {
                c.push(z % p);
                z /= p;
            }
            fp_poly::trim(&mut c);
            c
        };
        let from_poly = |c: &[u32]| -> u32 {
            c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            from_poly(&fp_poly::mul_mod(&to_poly(a), &to_poly(b), &modulus, p))
        };
        let slow_pow = |a: u32, mut k: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                k >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let omega = (1..q)
            .find(|&z| factors.iter().all(|&r| slow_pow(z, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..q - 1 {
            exp.push(acc);
            log[acc as usize] = i;
            acc = slow_mul(acc, omega);
        }
        debug_assert_eq!(acc, 1);

        Ok(FieldCtx { p, e, q, modulus, omega: Fq(omega), exp, log })
    }

    /// `F_q` for a prime power `q` with default modulus.
    pub fn with_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NonPrime(q as u32))?;
        Self::new(p, e, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn omega(&self) -> Fq {
        self.omega
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.q).map(Fq)
    }

    pub fn from_index(&self, index: u32) -> Fq {
        assert!(index < self.q, "index {index} out of range for F_{}", self.q);
        Fq(index)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, k: i64) -> Fq {
        Fq(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn coords(&self, a: Fq) -> Vec<u32> {
        let mut z = a.0;
        (0..self.e)
            .map(|_| {
                let d = z % self.p;
                z /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Fq {
        assert_eq!(coords.len(), self.e as usize);
        Fq(coords.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p))
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if self.e == 1 {
            return Fq((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fq(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.q);
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Fq(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    /// `a^k` for any integer `k` (`0^0 = 1`; negative powers of zero panic).
    pub fn pow(&self, a: Fq, k: i64) -> Fq {
        if a.is_zero() {
            assert!(k >= 0, "negative power of zero");
            return if k == 0 { Fq::ONE } else { Fq::ZERO };
        }
        let n = (self.q - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        Fq(self.exp[(l * k.rem_euclid(n)).rem_euclid(n) as usize])
    }

    /// `omega^i` for any integer `i`.
    pub fn omega_pow(&self, i: i64) -> Fq {
        let n = (self.q - 1) as i64;
        Fq(self.exp[i.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to the base `omega`, with values in `I = {1, ..., q-1}`.
    pub fn dlog(&self, z: Fq) -> Result<u32, FieldError> {
        if z.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let l = self.log[z.0 as usize];
        Ok(if l == 0 { self.q - 1 } else { l })
    }

    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as i64)
    }

    /// Orbits of `I = {1, ..., q-1}` under `i -> p*i mod (q-1)`, each sorted, listed by
    /// their minimum.
    pub fn frobenius_orbits(&self) -> Vec<Vec<u32>> {
        let n = self.q - 1;
        let mut seen = vec![false; self.q as usize];
        let mut orbits = Vec::new();
        for i in 1..=n {
            if seen[i as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut j = i;
            loop {
                seen[j as usize] = true;
                orbit.push(j);
                j = ((j as u64 * self.p as u64) % n as u64) as u32;
                if j == 0 {
                    j = n;
                }
                if j == i {
                    break;
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Parses `0`, `1`, `w`, `w^k`, a decimal encoding, `[c0,c1,...]` coordinates, or an
    /// integer with a leading `-` (reduced mod p).
    pub fn parse_elem(&self, s: &str) -> Result<Fq, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        if let Some(rest) = s.strip_prefix('w') {
            if rest.is_empty() {
                return Ok(self.omega);
            }
            let k: i64 = rest.strip_prefix('^').ok_or_else(err)?.trim().parse().map_err(|_| err())?;
            return Ok(self.omega_pow(k));
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coords: Vec<u32> = inner
                .split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse::<i64>().map(|v| v.rem_euclid(self.p as i64) as u32))
                .collect::<Result<_, _>>()
                .map_err(|_| err())?;
            if coords.len() != self.e as usize {
                return Err(err());
            }
            return Ok(self.from_coords(&coords));
        }
        if let Some(rest) = s.strip_prefix('-') {
            let v: i64 = rest.trim().parse().map_err(|_| err())?;
            return Ok(self.from_int(-v));
        }
        let v: u64 = s.parse().map_err(|_| err())?;
        if v >= self.q as u64 {
            return Err(err());
        }
        Ok(Fq(v as u32))
    }

    /// Inverse of [`FieldCtx::parse_elem`] for prime fields, `w^k` notation otherwise.
    pub fn format_elem(&self, a: Fq) -> String {
        if self.e == 1 || a.0 < 2 {
            a.0.to_string()
        } else {
            format!("w^{}", self.log[a.0 as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_has_trivial_generator() {
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.omega(), Fq::ONE);
        assert_eq!(f.dlog(Fq::ONE).unwrap(), 1);
        assert_eq!(f.frobenius_orbits(), vec![vec![1]]);
    }

    #[test]
    fn f5_generator_is_two() {
        // brute force: orders of 2, 3, 4 mod 5 are 4, 4, 2
        let order = |g: u32| (1..=4).find(|&k| (g as u64).pow(k) % 5 == 1).unwrap();
        assert_eq!((order(2), order(3), order(4)), (4, 4, 2));
        let f = FieldCtx::new(5, 1, None).unwrap();
        assert_eq!(f.omega(), Fq(2));
        assert_eq!(f.dlog(Fq(4)).unwrap(), 2);
    }

    #[test]
    fn f16_default_modulus_and_order() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        let w = f.omega();
        let ord = (1..=15).find(|&k| f.pow(w, k) == Fq::ONE).unwrap();
        assert_eq!(ord, 15);
        assert_eq!(f.dlog(w).unwrap(), 1);
        assert_eq!(f.dlog(Fq::ONE).unwrap(), 15);
    }

    #[test]
    fn orbits_of_16_and_9() {
        let f16 = FieldCtx::with_order(16).unwrap();
        assert_eq!(
            f16.frobenius_orbits(),
            vec![vec![1, 2, 4, 8], vec![3, 6, 9, 12], vec![5, 10], vec![7, 11, 13, 14], vec![15]]
        );
        // i -> 3i mod 8, enumerated by hand
        let f9 = FieldCtx::with_order(9).unwrap();
        assert_eq!(
            f9.frobenius_orbits(),
            vec![vec![1, 3], vec![2, 6], vec![4], vec![5, 7], vec![8]]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), FieldError::NonPrime(4));
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(matches!(FieldCtx::new(2, 2, Some(&[1, 0, 1])), Err(FieldError::Reducible(_))));
        let f = FieldCtx::with_order(9).unwrap();
        assert_eq!(f.dlog(Fq::ZERO), Err(FieldError::ZeroElement));
    }

    #[test]
    fn dlog_round_trip_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81] {
            let f = FieldCtx::with_order(q).unwrap();
            for z in f.nonzero_elements() {
                let i = f.dlog(z).unwrap();
                assert!((1..=f.q() - 1).contains(&i));
                assert_eq!(f.omega_pow(i as i64), z);
            }
            let total: usize = f.frobenius_orbits().iter().map(|o| o.len()).sum();
            assert_eq!(total as u32, f.q() - 1);
            for o in f.frobenius_orbits() {
                assert_eq!(f.e() as usize % o.len(), 0);
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for q in [4u64, 8, 9, 16] {
            let f = FieldCtx::with_order(q).unwrap();
            let els: Vec<Fq> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fq::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_elements() {
        let f = FieldCtx::with_order(16).unwrap();
        assert_eq!(f.parse_elem("w").unwrap(), f.omega());
        assert_eq!(f.parse_elem("w^15").unwrap(), Fq::ONE);
        assert_eq!(f.parse_elem("[0,1,0,0]").unwrap(), Fq(2));
        assert_eq!(f.parse_elem("5").unwrap(), Fq(5));
        assert!(f.parse_elem("16").is_err());
        let f3 = FieldCtx::with_order(3).unwrap();
        assert_eq!(f3.parse_elem("-1").unwrap(), Fq(2));
    }
}
