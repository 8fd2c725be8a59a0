//! Degrees of ray class fields of `F_q(x)` through cyclic codes.
//!
//! `S` holds the zero of `x` and the zeros `P_alpha` of `x - alpha` for `alpha` in
//! `A_S`; the modulus is a power of the pole of `x`. The exponents `I_S` index
//! `A_S` by discrete logarithm, and `e_S^(n)` measures how much of `R_S` is cut out
//! by the conditions `f(w^i) = 0` for `i = n`.

use serde::Serialize;
use thiserror::Error;

use crate::ffield::{FieldCtx, Fq};
use crate::lambda::{p_free_part, Description, LambdaSeq, LambdaSource};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MethodAError {
    #[error("exponent {0} is outside 1..q-1")]
    ExponentOutOfRange(u32),
    #[error("alpha = 0 is already in S through the zero of x")]
    ZeroAlpha,
    #[error("{what} outside the admissible range for q = {q}")]
    Domain { what: String, q: u32 },
}

/// `A_S` given by its exponent set `I_S`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RationalSet {
    exponents: Vec<u32>,
}

impl RationalSet {
    pub fn from_exponents(ctx: &FieldCtx, exponents: &[u32]) -> Result<Self, MethodAError> {
        let q1 = ctx.q() - 1;
        let mut exps = exponents.to_vec();
        if let Some(&bad) = exps.iter().find(|&&j| j == 0 || j > q1) {
            return Err(MethodAError::ExponentOutOfRange(bad));
        }
        exps.sort_unstable();
        exps.dedup();
        Ok(RationalSet { exponents: exps })
    }

    pub fn from_alphas(ctx: &FieldCtx, alphas: &[Fq]) -> Result<Self, MethodAError> {
        let exps: Vec<u32> = alphas
            .iter()
            .map(|&a| ctx.dlog(a).map_err(|_| MethodAError::ZeroAlpha))
            .collect::<Result<_, _>>()?;
        Self::from_exponents(ctx, &exps)
    }

    /// All rational places except the pole: `|S| = q`.
    pub fn full(ctx: &FieldCtx) -> Self {
        RationalSet { exponents: (1..ctx.q()).collect() }
    }

    /// The first `s - 1` powers `w, w^2, ..`; a set of size `s`.
    pub fn initial_segment(ctx: &FieldCtx, s: u32) -> Result<Self, MethodAError> {
        if s == 0 || s > ctx.q() {
            return Err(MethodAError::Domain { what: format!("|S| = {s}"), q: ctx.q() });
        }
        Ok(RationalSet { exponents: (1..s).collect() })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn alphas(&self, ctx: &FieldCtx) -> Vec<Fq> {
        self.exponents.iter().map(|&j| ctx.omega_pow(i64::from(j))).collect()
    }

    /// `|S|`, counting the zero of `x`.
    pub fn size(&self) -> u32 {
        self.exponents.len() as u32 + 1
    }
}

/// Initials of `q` and their orbit lengths `e^(n)`, by increasing `n`.
pub fn initials(ctx: &FieldCtx) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> =
        ctx.frobenius_orbits().iter().map(|o| (o[0], o.len() as u32)).collect();
    out.sort_unstable();
    out
}

/// `e^(n)` for `n = 0..=q`, zero away from initials.
pub fn orbit_lengths(ctx: &FieldCtx) -> Vec<u32> {
    let mut e = vec![0; ctx.q() as usize + 1];
    for (n, len) in initials(ctx) {
        e[n as usize] = len;
    }
    e
}

/// Row-echelon basis over `F_p`, grown one vector at a time.
struct Echelon {
    p: u32,
    /// `(pivot column, row scaled so the pivot is 1)`
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new(p: u32) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Adds `v` and reports whether the rank went up.
    fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let p = self.p;
        for (col, row) in &self.rows {
            let c = v[*col];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (p - c) * r) % p;
                }
            }
        }
        let Some(col) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = (1..p).find(|&x| x * v[col] % p == 1).expect("p is prime");
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        self.rows.push((col, v));
        true
    }
}

/// Everything Method A knows about one set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EProfile {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    /// `e_S^(n)` for `n = 0..=q`; entry 0 is unused and zero.
    pub e_s: Vec<u32>,
    /// `rank M^(n)` for `n = 1..=q`, with entry 0 unused.
    pub ranks: Vec<u32>,
    /// `|I_S|`.
    pub dim: u32,
    pub n_s_prime: u32,
    pub n_s: u32,
}

impl EProfile {
    /// `e_S^(n)`, zero for `n >= q`.
    pub fn e_s(&self, n: u64) -> u32 {
        self.e_s.get(n as usize).copied().unwrap_or(0)
    }

    /// The recursion is proven for every `n`.
    pub fn fully_valid(&self) -> bool {
        self.p * self.n_s_prime >= self.n_s
    }

    /// Last index of a proven `lambda`, or `None` if all are.
    pub fn valid_to(&self) -> Option<usize> {
        (!self.fully_valid()).then_some((self.p * self.n_s_prime) as usize)
    }

    /// `sum e_S^(n) t^n`; equals the description of `S` when [`Self::fully_valid`].
    pub fn description(&self) -> Description {
        let mut exps = Vec::new();
        for (n, &c) in self.e_s.iter().enumerate() {
            exps.extend(std::iter::repeat_n(n as u32, c as usize));
        }
        Description::new(exps)
    }
}

/// Computes `e_S^(n) = rank M^(n+1) - rank M^(n)` with one sweep over the rows
/// `(w^{ij})_{j in I_S}`, each expanded into `e` rows over `F_p`.
pub fn e_profile(ctx: &FieldCtx, set: &RationalSet) -> EProfile {
    let (p, e, q) = (ctx.p(), ctx.e(), ctx.q());
    let cols = set.exponents();
    let mut ech = Echelon::new(p);
    let mut ranks = vec![0u32; q as usize + 1];
    let mut e_s = vec![0u32; q as usize + 1];
    let mut rank = 0u32;
    for i in 1..q {
        let coords: Vec<Vec<u32>> =
            cols.iter().map(|&j| ctx.coords(ctx.omega_pow(i64::from(i) * i64::from(j)))).collect();
        let before = rank;
        for k in 0..e as usize {
            if ech.insert(coords.iter().map(|c| c[k]).collect()) {
                rank += 1;
            }
        }
        // rows 1..i are in, so this is rank M^(i+1)
        ranks[i as usize + 1] = rank;
        e_s[i as usize] = rank - before;
    }
    let dim = cols.len() as u32;
    let n_s_prime = (1..)
        .find(|&n| e_s.get(p_free_part(n, u64::from(p)) as usize).copied().unwrap_or(0) < e)
        .expect("e_S vanishes beyond q") as u32;
    let n_s = n_s_literal(q, p, dim, &ranks);
    EProfile { q, p, e, e_s, ranks, dim, n_s_prime, n_s }
}

/// `min({q - q/p} u {n : rank M^(n) = |I_S|}) - 1`.
fn n_s_literal(q: u32, p: u32, dim: u32, ranks: &[u32]) -> u32 {
    let full = (1..=q).find(|&n| ranks[n as usize] == dim).unwrap_or(q);
    full.min(q - q / p) - 1
}

/// `lambda_S^(n)` for `n <= n_max`, truncated where the recursion is not proven.
pub fn lambda_seq_a(ctx: &FieldCtx, set: &RationalSet, n_max: usize) -> (EProfile, LambdaSeq) {
    let prof = e_profile(ctx, set);
    let p = u64::from(ctx.p());
    let seq = LambdaSeq::from_decrements(ctx.p(), ctx.e(), n_max, prof.valid_to(), LambdaSource::MethodA, |n| {
        prof.e_s(p_free_part(n, p))
    });
    (prof, seq)
}

/// Genus and number of rational places of `L_{l,S}` for `|S| = q`, in closed form.
pub fn llcor_closed_form(p: u32, e: u32, l: u32) -> Result<(u64, u64), MethodAError> {
    let q = u64::from(p).pow(e);
    let pl = u64::from(p).pow(l);
    let n_points = 1 + pl * q;
    let out_of_range = || MethodAError::Domain { what: format!("l = {l}"), q: q as u32 };
    let twice_g = if e.is_multiple_of(2) {
        let r = u64::from(p).pow(e / 2);
        if 2 * l <= e {
            r * (pl - 1)
        } else if 2 * l <= 3 * e {
            r * (2 * pl - r - 1)
        } else {
            return Err(out_of_range());
        }
    } else {
        let r = u64::from(p).pow(e.div_ceil(2));
        // the branches overlap at l = i e; either gives the same value
        let i = (1..p).find(|&i| (i - 1) * e <= l && l <= i * e).ok_or_else(out_of_range)?;
        let qi = q.pow(i);
        pl * (r + u64::from(i) - 1) - r - (qi - q) / (q - 1)
    };
    Ok((twice_g / 2, n_points))
}
