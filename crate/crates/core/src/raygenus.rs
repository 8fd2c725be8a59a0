//! Degrees, discriminants, genera and rational-place counts of the fields `L_{l,S}`
//! cut out of the ray class fields `K_S^{n P}`, plus the closed forms for `|S| = 1`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::lambda::{LambdaError, LambdaSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayGenusError {
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error("{what}: {numerator} is not divisible by {denominator}")]
    IntegralityViolation { what: &'static str, numerator: i128, denominator: i128 },
    #[error("the cycle must be a nonzero sum of places with positive multiplicity")]
    EmptyCycle,
    #[error("genus paths disagree: closed form {closed}, discriminant {discriminant}, different {different}")]
    GenusMismatch { closed: i128, discriminant: i128, different: i128 },
    #[error("value out of range: {0}")]
    Overflow(&'static str),
}

fn pow(p: u32, k: u32) -> Result<i128, RayGenusError> {
    i128::from(p).checked_pow(k).ok_or(RayGenusError::Overflow("p^k"))
}

fn exact_div(what: &'static str, numerator: i128, denominator: i128) -> Result<i128, RayGenusError> {
    let (q, r) = numerator.div_rem(&denominator);
    if r != 0 {
        return Err(RayGenusError::IntegralityViolation { what, numerator, denominator });
    }
    Ok(q)
}

/// Least `n >= 1` with `lambda^(n) >= l`.
pub fn conductor_exponent(lambda: &LambdaSeq, l: u32) -> Result<usize, RayGenusError> {
    Ok(lambda.conductor_exponent(l)?)
}

/// `sum_{nu < n} p^{lambda^(nu)}`.
fn level_sum(lambda: &LambdaSeq, n: usize) -> Result<i128, RayGenusError> {
    (0..n).try_fold(0i128, |acc, nu| {
        let v = lambda.value(nu).ok_or(RayGenusError::Overflow("lambda index"))?;
        Ok(acc + pow(lambda.p(), v)?)
    })
}

/// `g(L_{l,S}) = 1 + h_S/2 * (p^l (2 g_K - 2 + n) - sum_{nu < n} p^{lambda^(nu)})`.
pub fn genus_l(g_k: u64, h_s: u64, lambda: &LambdaSeq, l: u32) -> Result<i128, RayGenusError> {
    let n = conductor_exponent(lambda, l)?;
    let inner = pow(lambda.p(), l)? * (2 * i128::from(g_k) - 2 + n as i128) - level_sum(lambda, n)?;
    Ok(1 + exact_div("h_S times the bracket", i128::from(h_s) * inner, 2)?)
}

/// Degree of the discriminant at one rational place: `[L:K] m - sum_{n < m} [L^n(P):K]`.
pub fn discriminant_degree(level_degrees: &[u64], total_degree: u64, m: usize) -> i128 {
    let below: i128 = level_degrees.iter().take(m).map(|&d| i128::from(d)).sum();
    i128::from(total_degree) * m as i128 - below
}

/// Hurwitz: `2 g_L - 2 = [L:K] (2 g_K - 2) + deg d(L|K)` for a geometric extension.
pub fn hurwitz_genus(g_k: u64, degree: u64, disc_degree: i128) -> Result<i128, RayGenusError> {
    let twice = i128::from(degree) * (2 * i128::from(g_k) - 2) + disc_degree;
    Ok(exact_div("2g - 2 from Hurwitz", twice, 2)? + 1)
}

/// Genus of `L_{l,S}` through its discriminant: the ramification fields at `P` are
/// `L cap K_S^{nu P}`, of degree `h_S p^{min(l, lambda^(nu))}` over `K`.
pub fn genus_via_discriminant(g_k: u64, h_s: u64, lambda: &LambdaSeq, l: u32) -> Result<i128, RayGenusError> {
    let n = conductor_exponent(lambda, l)?;
    let levels: Vec<u64> = (0..n)
        .map(|nu| {
            let lam = lambda.value(nu).expect("below the conductor").min(l);
            Ok(h_s * u64::try_from(pow(lambda.p(), lam)?).map_err(|_| RayGenusError::Overflow("degree"))?)
        })
        .collect::<Result<_, RayGenusError>>()?;
    let total = h_s * u64::try_from(pow(lambda.p(), l)?).map_err(|_| RayGenusError::Overflow("degree"))?;
    hurwitz_genus(g_k, total, discriminant_degree(&levels, total, n))
}

/// Different exponent from upper ramification: `sum_n (|G^0| - (G^0 : G^n))`, with
/// `upper_orders[n] = |G^n|` for `n >= 0` and trivial groups beyond the slice.
pub fn different_exponent_upper(upper_orders: &[u64]) -> u64 {
    let Some(&g0) = upper_orders.first() else {
        return 0;
    };
    upper_orders.iter().map(|&gn| g0 - g0 / gn).sum()
}

/// Hilbert's formula `sum_{i >= 0} (|G_i| - 1)` for lower ramification orders.
pub fn different_exponent_lower(lower_orders: &[u64]) -> u64 {
    lower_orders.iter().map(|&g| g - 1).sum()
}

/// Lower-numbering orders `|G_i|`, `i >= 0`, from upper-numbering orders at integers,
/// via the Herbrand function. Needs integral upper jumps.
pub fn lower_from_upper(upper_orders: &[u64]) -> Vec<u64> {
    let Some(&g0) = upper_orders.first() else {
        return Vec::new();
    };
    let mut lower = Vec::new();
    for &gn in upper_orders {
        // upper step n -> n+1 spans (G^0 : G^n) lower indices, all with group G^n
        let width = g0 / gn;
        lower.extend(std::iter::repeat_n(gn, width as usize));
    }
    lower
}

/// Genus of `L_{l,S}` through the upper-index different formula at `P`.
pub fn genus_via_different(g_k: u64, h_s: u64, lambda: &LambdaSeq, l: u32) -> Result<i128, RayGenusError> {
    let n = conductor_exponent(lambda, l)?;
    let p = lambda.p();
    let g0 = u64::try_from(pow(p, l)?).map_err(|_| RayGenusError::Overflow("degree"))?;
    // |G^nu| = p^l / [L^nu : L^0] for 0 <= nu < n, trivial from n on
    let orders: Vec<u64> = (0..n)
        .map(|nu| g0 / u64::try_from(pow(p, lambda.value(nu).expect("computed").min(l)).unwrap_or(1)).unwrap_or(1))
        .collect();
    let d = different_exponent_upper(&orders);
    // h_S places above P, each with inertia degree 1 and ramification index p^l
    let disc = i128::from(h_s) * i128::from(d);
    hurwitz_genus(g_k, h_s * g0, disc)
}

/// `h_S p^l s_1`, plus `h_S` when `h_S = h_{S u {P}}`.
pub fn n_points_lower(h_s: u64, p: u32, l: u32, s1: u64, eps: bool) -> u64 {
    h_s * u64::from(p).pow(l) * s1 + if eps { h_s } else { 0 }
}

/// Equality in the place count is guaranteed when `l > lambda_{S u {Q}}^(n)` for every
/// rational `Q` outside `S u {P}`; pass those values.
pub fn split_certified(l: u32, enlarged: impl IntoIterator<Item = u32>) -> bool {
    enlarged.into_iter().all(|lam| l > lam)
}

/// Invariants of one field `L_{l,S}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldInvariants {
    pub q: u64,
    pub g_k: u64,
    pub h_s: u64,
    pub l: u32,
    /// Conductor exponent at `P`.
    pub n: usize,
    /// `[L_{l,S} : K] = h_S p^l`.
    pub degree: u64,
    pub genus: u64,
    pub n_lower: u64,
    pub exact: bool,
}

/// Assembles the invariants of `L_{l,S}`; all three genus computations must agree.
#[allow(clippy::too_many_arguments)]
pub fn field_invariants(
    q: u64,
    g_k: u64,
    h_s: u64,
    lambda: &LambdaSeq,
    l: u32,
    s1: u64,
    eps: bool,
    exact: bool,
) -> Result<FieldInvariants, RayGenusError> {
    let n = conductor_exponent(lambda, l)?;
    let genus = genus_l(g_k, h_s, lambda, l)?;
    let discriminant = genus_via_discriminant(g_k, h_s, lambda, l)?;
    let different = genus_via_different(g_k, h_s, lambda, l)?;
    if genus != discriminant || genus != different {
        return Err(RayGenusError::GenusMismatch { closed: genus, discriminant, different });
    }
    let p = lambda.p();
    Ok(FieldInvariants {
        q,
        g_k,
        h_s,
        l,
        n,
        degree: h_s * u64::from(p).pow(l),
        genus: u64::try_from(genus).map_err(|_| RayGenusError::Overflow("negative genus"))?,
        n_lower: n_points_lower(h_s, p, l, s1, eps),
        exact,
    })
}

/// A place in a cycle: its degree and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclePart {
    pub degree: u32,
    pub mult: u32,
}

/// `phi(m) = prod_{m_P > 0} (q^{deg P} - 1) q^{(m_P - 1) deg P}`.
pub fn phi(q: u64, cycle: &[CyclePart]) -> Result<i128, RayGenusError> {
    cycle.iter().filter(|c| c.mult > 0).try_fold(1i128, |acc, c| {
        let qd = i128::from(q).checked_pow(c.degree).ok_or(RayGenusError::Overflow("q^deg"))?;
        let tail = qd.checked_pow(c.mult - 1).ok_or(RayGenusError::Overflow("phi"))?;
        acc.checked_mul((qd - 1) * tail).ok_or(RayGenusError::Overflow("phi"))
    })
}

fn cycle_degree(cycle: &[CyclePart]) -> i128 {
    cycle.iter().map(|c| i128::from(c.degree) * i128::from(c.mult)).sum()
}

/// `[K_S^m : K] = h d phi(m) / (q - 1)` for `S` a single place of degree `d`.
pub fn hayes_degree(q: u64, d: u32, cycle: &[CyclePart], h: u64) -> Result<i128, RayGenusError> {
    if cycle_degree(cycle) == 0 {
        return Ok(i128::from(h) * i128::from(d));
    }
    exact_div("Hayes degree", i128::from(h) * i128::from(d) * phi(q, cycle)?, i128::from(q) - 1)
}

/// `g(K_S^m) = 1 + h (phi(m)(2g - 2 + deg m) - s) / (2q - 2)`.
pub fn hayes_genus(q: u64, cycle: &[CyclePart], h: u64, g: u64) -> Result<i128, RayGenusError> {
    let support: Vec<CyclePart> = cycle.iter().copied().filter(|c| c.mult > 0).collect();
    if support.is_empty() {
        return Err(RayGenusError::EmptyCycle);
    }
    let ph = phi(q, &support)?;
    let s: i128 = if support.len() == 1 {
        let c = support[0];
        let ph_p = phi(q, &[CyclePart { degree: c.degree, mult: 1 }])?;
        (ph / ph_p + i128::from(q) - 2) * i128::from(c.degree)
    } else {
        support
            .iter()
            .map(|c| Ok(ph * i128::from(c.degree) / phi(q, &[CyclePart { degree: c.degree, mult: 1 }])?))
            .sum::<Result<i128, RayGenusError>>()?
    };
    let num = i128::from(h) * (ph * (2 * i128::from(g) - 2 + cycle_degree(&support)) - s);
    Ok(1 + exact_div("Hayes genus", num, 2 * i128::from(q) - 2)?)
}
