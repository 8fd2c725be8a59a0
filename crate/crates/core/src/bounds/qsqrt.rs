use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact element `a + b*sqrt(q)` of `Q(sqrt q)`.
///
/// When `q` is a perfect square the value is kept with `b = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrtNum {
    a: BigRational,
    b: BigRational,
    q: u64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer square root of `q` if `q` is a perfect square.
pub fn exact_sqrt(q: u64) -> Option<u64> {
    let s = q.sqrt();
    (s * s == q).then_some(s)
}

impl QSqrtNum {
    pub fn new(a: BigRational, b: BigRational, q: u64) -> Self {
        assert!(q > 0, "radicand must be positive");
        match exact_sqrt(q) {
            Some(s) => QSqrtNum { a: a + b * rat(s as i64), b: BigRational::zero(), q },
            None => QSqrtNum { a, b, q },
        }
    }

    pub fn from_rational(a: BigRational, q: u64) -> Self {
        Self::new(a, BigRational::zero(), q)
    }

    pub fn from_int(a: i64, q: u64) -> Self {
        Self::from_rational(rat(a), q)
    }

    /// `sqrt(q)` itself.
    pub fn sqrt_q(q: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), q)
    }

    /// `(a_num/a_den) + (b_num/b_den) sqrt(q)` from small integers.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64, q: u64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(a_num), BigInt::from(a_den)),
            BigRational::new(BigInt::from(b_num), BigInt::from(b_den)),
            q,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: compare a^2 with b^2 q
                let a2 = &self.a * &self.a;
                let b2q = &self.b * &self.b * rat(self.q as i64);
                match a2.cmp(&b2q) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        (self.clone() - QSqrtNum::from_rational(r.clone(), self.q)).signum()
    }

    pub fn cmp_int(&self, n: i64) -> Ordering {
        self.cmp_rational(&rat(n))
    }

    pub fn conjugate(&self) -> Self {
        QSqrtNum { a: self.a.clone(), b: -self.b.clone(), q: self.q }
    }

    /// Field norm `a^2 - b^2 q`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.q as i64)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let n = self.norm();
        QSqrtNum { a: &self.a / &n, b: -(&self.b / &n), q: self.q }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.q as f64).sqrt()
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i64);
        loop {
            let lower = self.cmp_rational(&BigRational::from_integer(k.clone()));
            if lower == Ordering::Less {
                k -= 1;
                continue;
            }
            let upper = self.cmp_rational(&BigRational::from_integer(&k + 1));
            if upper != Ordering::Less {
                k += 1;
                continue;
            }
            return k;
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QSqrtNum::from_int(1, self.q);
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.q, other.q, "mixing different radicands");
    }
}

impl PartialOrd for QSqrtNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrtNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        (self.clone() - other.clone()).signum()
    }
}

impl Add for QSqrtNum {
    type Output = QSqrtNum;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        QSqrtNum { a: self.a + rhs.a, b: self.b + rhs.b, q: self.q }
    }
}

impl Sub for QSqrtNum {
    type Output = QSqrtNum;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        QSqrtNum { a: self.a - rhs.a, b: self.b - rhs.b, q: self.q }
    }
}

impl Neg for QSqrtNum {
    type Output = QSqrtNum;
    fn neg(self) -> Self {
        QSqrtNum { a: -self.a, b: -self.b, q: self.q }
    }
}

impl Mul for QSqrtNum {
    type Output = QSqrtNum;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        let q = rat(self.q as i64);
        QSqrtNum {
            a: &self.a * &rhs.a + &self.b * &rhs.b * q,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            q: self.q,
        }
    }
}

impl Div for QSqrtNum {
    type Output = QSqrtNum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl fmt::Display for QSqrtNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        // common denominator form (x + y sqrt q)/d
        let d = num_integer::lcm(self.a.denom().clone(), self.b.denom().clone());
        let x = (&self.a * BigRational::from_integer(d.clone())).to_integer();
        let y = (&self.b * BigRational::from_integer(d.clone())).to_integer();
        let sign = if y.is_negative() { '-' } else { '+' };
        let body = if x.is_zero() {
            format!("{}{}√{}", if y.is_negative() { "-" } else { "" }, y.abs(), self.q)
        } else {
            format!("{} {} {}√{}", x, sign, y.abs(), self.q)
        };
        if d.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{d}")
        }
    }
}

impl fmt::Debug for QSqrtNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSqrtNum[{self}]")
    }
}
