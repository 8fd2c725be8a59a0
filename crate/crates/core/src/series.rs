//! Truncated power series over `F_q`.
//!
//! A [`Series`] stores the coefficients of `pi^0 .. pi^{n-1}`; every operation keeps the
//! result exact modulo `pi^n`, where `n` is the shorter of the input precisions.

use crate::ffield::{FieldCtx, Fq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Fq>,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series { coeffs: vec![Fq::ZERO; prec] }
    }

    pub fn one(prec: usize) -> Self {
        Self::monomial(Fq::ONE, 0, prec)
    }

    /// `c * pi^k`, truncated to `prec`.
    pub fn monomial(c: Fq, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>, prec: usize) -> Self {
        coeffs.resize(prec, Fq::ZERO);
        Series { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fq {
        self.coeffs.get(k).copied().unwrap_or(Fq::ZERO)
    }

    pub fn set_coeff(&mut self, k: usize, c: Fq) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    /// Index of the first nonzero coefficient, `None` if zero to this precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Self::from_coeffs(self.coeffs[..prec.min(self.prec())].to_vec(), prec.min(self.prec()))
    }

    /// Divides by `pi^k`; the top `k` coefficients become unknown and are dropped.
    pub fn shift_down(&self, k: usize) -> Self {
        Series { coeffs: self.coeffs.iter().skip(k).copied().collect() }
    }

    /// Multiplies by `pi^k` keeping the precision.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.prec();
        let mut coeffs = vec![Fq::ZERO; n];
        if k < n {
            coeffs[k..].copy_from_slice(&self.coeffs[..n - k]);
        }
        Series { coeffs }
    }

    pub fn add(&self, f: &FieldCtx, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        Series { coeffs: (0..n).map(|i| f.add(self.coeffs[i], other.coeffs[i])).collect() }
    }

    pub fn sub(&self, f: &FieldCtx, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        Series { coeffs: (0..n).map(|i| f.sub(self.coeffs[i], other.coeffs[i])).collect() }
    }

    pub fn neg(&self, f: &FieldCtx) -> Self {
        Series { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn scale(&self, f: &FieldCtx, c: Fq) -> Self {
        Series { coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn mul(&self, f: &FieldCtx, other: &Self) -> Self {
        let n = self.prec().min(other.prec());
        let mut out = vec![Fq::ZERO; n];
        for (i, &a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Series { coeffs: out }
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inv(&self, f: &FieldCtx) -> Option<Self> {
        let n = self.prec();
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return None;
        }
        let c0_inv = f.inv(c0);
        let mut out = vec![Fq::ZERO; n];
        for k in 0..n {
            // sum_{i=1..k} a_i out_{k-i}
            let mut acc = if k == 0 { Fq::ONE } else { Fq::ZERO };
            for i in 1..=k {
                let a = self.coeffs[i];
                if !a.is_zero() && !out[k - i].is_zero() {
                    acc = f.sub(acc, f.mul(a, out[k - i]));
                }
            }
            out[k] = f.mul(acc, c0_inv);
        }
        Some(Series { coeffs: out })
    }

    pub fn div(&self, f: &FieldCtx, other: &Self) -> Option<Self> {
        Some(self.mul(f, &other.inv(f)?))
    }

    /// Integer power, negative exponents allowed for units.
    pub fn pow(&self, f: &FieldCtx, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv(f)? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Series::one(self.prec());
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(f, &b);
            }
        }
        Some(acc)
    }

    /// In-place division by `1 + gamma pi^k` (`k >= 1`), linear time.
    pub fn div_binomial(&mut self, f: &FieldCtx, gamma: Fq, k: usize) {
        assert!(k >= 1);
        for i in k..self.coeffs.len() {
            let prev = self.coeffs[i - k];
            if !prev.is_zero() {
                self.coeffs[i] = f.sub(self.coeffs[i], f.mul(gamma, prev));
            }
        }
    }

    /// In-place multiplication by `1 + gamma pi^k` (`k >= 1`), linear time.
    pub fn mul_binomial(&mut self, f: &FieldCtx, gamma: Fq, k: usize) {
        assert!(k >= 1);
        for i in (k..self.coeffs.len()).rev() {
            let prev = self.coeffs[i - k];
            if !prev.is_zero() {
                self.coeffs[i] = f.add(self.coeffs[i], f.mul(gamma, prev));
            }
        }
    }

    /// `self(g(pi))` for `g` with zero constant term.
    pub fn compose(&self, f: &FieldCtx, g: &Self) -> Self {
        assert!(g.coeff(0).is_zero(), "inner series must vanish at 0");
        let n = self.prec().min(g.prec());
        let g = g.truncate(n);
        let mut acc = Series::zero(n);
        for k in (0..n).rev() {
            acc = acc.mul(f, &g);
            acc.coeffs[0] = f.add(acc.coeffs[0], self.coeffs[k]);
        }
        acc
    }

    /// Compositional inverse of a series `c_1 pi + c_2 pi^2 + ...` with `c_1 != 0`.
    pub fn reverse(&self, f: &FieldCtx) -> Option<Self> {
        let n = self.prec();
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return None;
        }
        // the missing top coefficient of the derivative only reaches degree >= prec in a step
        let deriv = Series::from_coeffs(self.derivative(f).coeffs, n);
        // Newton on self(r) = pi
        let mut r = Series::monomial(f.inv(self.coeff(1)), 1, n);
        let mut prec = 2;
        let pi = Series::monomial(Fq::ONE, 1, n);
        while prec < n {
            prec = (2 * prec).min(n);
            let r_t = r.truncate(prec);
            let resid = self.truncate(prec).compose(f, &r_t).sub(f, &pi.truncate(prec));
            let slope = deriv.truncate(prec).compose(f, &r_t);
            let step = resid.div(f, &slope)?;
            r = Series::from_coeffs(r_t.sub(f, &step).coeffs, n);
        }
        Some(r.truncate(n))
    }

    /// Formal derivative; the top coefficient is lost.
    pub fn derivative(&self, f: &FieldCtx) -> Self {
        let n = self.prec();
        let mut out = vec![Fq::ZERO; n];
        for k in 1..n {
            out[k - 1] = f.mul(self.coeffs[k], f.from_int(k as i64));
        }
        Series { coeffs: out }.truncate(n.saturating_sub(1).max(1))
    }
}

/// Laurent series `pi^offset * unit` known modulo `pi^{offset + unit.prec()}`.
///
/// The unit part has nonzero constant term; a value that vanishes to the known
/// precision has an empty unit part and `offset` equal to that precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    offset: i64,
    unit: Series,
}

impl Laurent {
    /// `pi^offset * s`, normalising leading zeros of `s` into the offset.
    pub fn new(offset: i64, s: Series) -> Self {
        match s.valuation() {
            Some(v) => Laurent { offset: offset + v as i64, unit: s.shift_down(v) },
            None => Laurent { offset: offset + s.prec() as i64, unit: Series::zero(0) },
        }
    }

    /// A known-exact value represented to relative precision `prec`.
    pub fn from_poly(coeffs: &[Fq], offset: i64, prec: usize) -> Self {
        Self::new(offset, Series::from_coeffs(coeffs.to_vec(), prec))
    }

    pub fn zero_to(abs_prec: i64) -> Self {
        Laurent { offset: abs_prec, unit: Series::zero(0) }
    }

    /// Valuation, or `None` if the value is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        (self.unit.prec() > 0).then_some(self.offset)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn unit(&self) -> &Series {
        &self.unit
    }

    /// Exponent below which every coefficient is known.
    pub fn abs_prec(&self) -> i64 {
        self.offset + self.unit.prec() as i64
    }

    /// Coefficient of `pi^k`; `k` must be below [`Laurent::abs_prec`].
    pub fn coeff(&self, k: i64) -> Fq {
        debug_assert!(k < self.abs_prec());
        if k < self.offset {
            Fq::ZERO
        } else {
            self.unit.coeff((k - self.offset) as usize)
        }
    }

    /// Drops everything at or beyond `pi^abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs <= self.offset {
            return Laurent::zero_to(abs.min(self.abs_prec()));
        }
        let keep = ((abs - self.offset) as usize).min(self.unit.prec());
        Laurent { offset: self.offset, unit: self.unit.truncate(keep) }
    }

    pub fn add(&self, f: &FieldCtx, other: &Self) -> Self {
        let abs = self.abs_prec().min(other.abs_prec());
        let lo = self.offset.min(other.offset).min(abs);
        let len = (abs - lo) as usize;
        let mut coeffs = vec![Fq::ZERO; len];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let e = lo + k as i64;
            *c = f.add(self.coeff_or_zero(e), other.coeff_or_zero(e));
        }
        Laurent::new(lo, Series::from_coeffs(coeffs, len))
    }

    fn coeff_or_zero(&self, k: i64) -> Fq {
        if k < self.offset || k >= self.abs_prec() {
            Fq::ZERO
        } else {
            self.unit.coeff((k - self.offset) as usize)
        }
    }

    pub fn neg(&self, f: &FieldCtx) -> Self {
        Laurent { offset: self.offset, unit: self.unit.neg(f) }
    }

    pub fn sub(&self, f: &FieldCtx, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &FieldCtx, c: Fq) -> Self {
        if c.is_zero() {
            return Laurent::zero_to(self.abs_prec());
        }
        Laurent { offset: self.offset, unit: self.unit.scale(f, c) }
    }

    pub fn mul(&self, f: &FieldCtx, other: &Self) -> Self {
        match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => Laurent { offset: a + b, unit: self.unit.mul(f, &other.unit) },
            // 0 * u with u known to relative precision r is zero up to offset(0) + v(u)
            (None, Some(b)) => Laurent::zero_to(self.offset + b),
            (Some(a), None) => Laurent::zero_to(other.offset + a),
            (None, None) => Laurent::zero_to(self.offset + other.offset),
        }
    }

    pub fn inv(&self, f: &FieldCtx) -> Option<Self> {
        let v = self.valuation()?;
        Some(Laurent { offset: -v, unit: self.unit.inv(f)? })
    }

    pub fn div(&self, f: &FieldCtx, other: &Self) -> Option<Self> {
        Some(self.mul(f, &other.inv(f)?))
    }

    pub fn pow(&self, f: &FieldCtx, k: i64) -> Option<Self> {
        if k == 0 {
            return Some(Laurent { offset: 0, unit: Series::one(self.unit.prec().max(1)) });
        }
        let v = match self.valuation() {
            Some(v) => v,
            None if k > 0 => return Some(Laurent::zero_to(self.offset * k)),
            None => return None,
        };
        Some(Laurent { offset: v * k, unit: self.unit.pow(f, k)? })
    }

    /// Re-expands in a new parameter `t`, given `pi = r(t)` with `v_t(r) = 1`.
    pub fn substitute(&self, f: &FieldCtx, r: &Series) -> Option<Self> {
        debug_assert_eq!(r.valuation(), Some(1));
        let Some(v) = self.valuation() else {
            return Some(self.clone());
        };
        let r_unit = r.shift_down(1);
        let n = self.unit.prec().min(r_unit.prec());
        let composed = self.unit.truncate(n).compose(f, &r.truncate(n));
        let scale = r_unit.truncate(n).pow(f, v)?;
        Some(Laurent { offset: v, unit: composed.mul(f, &scale) })
    }
}
