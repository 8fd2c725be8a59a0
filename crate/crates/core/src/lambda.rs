//! Logarithmic degree sequences `lambda^(n)` and the descriptions that generate them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("no n <= {computed} with lambda^(n) >= {l}; extend the sequence")]
    OutOfRange { l: u32, computed: usize },
}

/// Largest power of `p` dividing `n`, as an exponent (`n >= 1`).
pub fn p_valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `n` with every factor `p` removed.
pub fn p_free_part(mut n: u64, p: u64) -> u64 {
    debug_assert!(n > 0);
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// The multiset `{n_1 <= ... <= n_r}`, read as the polynomial `sum t^{n_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Description(Vec<u32>);

impl Description {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        exponents.sort_unstable();
        Description(exponents)
    }

    pub fn empty() -> Self {
        Description(Vec::new())
    }

    /// Sorted exponents, with repetition.
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Pairs `(n, d_n)` with `d_n > 0`, by increasing `n`.
    pub fn terms(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &n in &self.0 {
            match out.last_mut() {
                Some((m, c)) if *m == n => *c += 1,
                _ => out.push((n, 1)),
            }
        }
        out
    }

    /// `|{ i : n_i <= n, n_i^* = n^* }|`, the amount subtracted at step `n`.
    pub fn delta_at(&self, n: u64, p: u64) -> u32 {
        let core = p_free_part(n, p);
        self.0
            .iter()
            .filter(|&&m| u64::from(m) <= n && p_free_part(u64::from(m), p) == core)
            .count() as u32
    }

    /// Parses `2t + t^3`, `t^2+t^5` or `0`.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        if t == "0" || t.is_empty() {
            return Some(Self::empty());
        }
        let mut out = Vec::new();
        for term in t.split('+') {
            let term = term.trim();
            let (coef, power) = term.split_once('t')?;
            let coef: u32 = if coef.trim().is_empty() { 1 } else { coef.trim().trim_end_matches('*').parse().ok()? };
            let power = power.trim();
            let power: u32 = if power.is_empty() { 1 } else { power.strip_prefix('^')?.trim().parse().ok()? };
            if power == 0 {
                return None;
            }
            out.extend(std::iter::repeat_n(power, coef as usize));
        }
        Some(Self::new(out))
    }
}

impl fmt::Display for Description {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (n, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *c > 1 {
                write!(f, "{c}")?;
            }
            match n {
                1 => write!(f, "t")?,
                _ => write!(f, "t^{n}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSource {
    MethodA,
    MethodB,
    Hayes,
}

impl fmt::Display for LambdaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaSource::MethodA => "A",
            LambdaSource::MethodB => "B",
            LambdaSource::Hayes => "hayes",
        })
    }
}

/// `lambda^(0), ..., lambda^(N)` for one set `S`, with the range in which the values
/// are proven.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSeq {
    values: Vec<u32>,
    p: u32,
    e: u32,
    /// `None` when the recursion holds for every `n`.
    valid_to: Option<usize>,
    source: LambdaSource,
}

impl LambdaSeq {
    /// Runs `lambda^(n+1) = lambda^(n) + e - dec(n)` from `lambda^(1) = 0`, stopping at
    /// `n_max` or at `valid_to`, whichever is smaller.
    pub fn from_decrements(
        p: u32,
        e: u32,
        n_max: usize,
        valid_to: Option<usize>,
        source: LambdaSource,
        mut dec: impl FnMut(u64) -> u32,
    ) -> Self {
        let last = valid_to.map_or(n_max, |v| v.min(n_max));
        let mut values = vec![0u32; last.max(1) + 1];
        for n in 1..last {
            let d = dec(n as u64);
            assert!(d <= e, "decrement {d} at n = {n} exceeds e = {e}");
            values[n + 1] = values[n] + e - d;
        }
        values.truncate(last + 1);
        LambdaSeq { values, p, e, valid_to, source }
    }

    /// The sequence determined by a description, valid for all `n`.
    pub fn from_description(desc: &Description, p: u32, e: u32, n_max: usize, source: LambdaSource) -> Self {
        Self::from_decrements(p, e, n_max, None, source, |n| desc.delta_at(n, u64::from(p)))
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, n: usize) -> Option<u32> {
        self.values.get(n).copied()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn valid_to(&self) -> Option<usize> {
        self.valid_to
    }

    pub fn source(&self) -> LambdaSource {
        self.source
    }

    /// Largest index held.
    pub fn computed_to(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_fully_valid(&self) -> bool {
        self.valid_to.is_none()
    }

    /// Least `n >= 1` with `lambda^(n) >= l`.
    pub fn conductor_exponent(&self, l: u32) -> Result<usize, LambdaError> {
        (1..self.values.len())
            .find(|&n| self.values[n] >= l)
            .ok_or(LambdaError::OutOfRange { l, computed: self.computed_to() })
    }

    /// Values `lambda^(1..=n)` as displayed in tables.
    pub fn from_one(&self) -> &[u32] {
        &self.values[1.min(self.values.len())..]
    }
}
