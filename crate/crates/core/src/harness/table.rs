//! Rows `(g, N, n, l, |S|, h_S, g_K)` for families of fields `L_{l,S}`.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{PlaceSpec, PlaneCurve};
use crate::ffield::{prime_power, FieldCtx};
use crate::lambda::{Description, LambdaSeq, LambdaSource};
use crate::method_a::RationalSet;
use crate::method_b::{describe_units, lambda_seq_b, UnitSystem};
use crate::raygenus::{field_invariants, genus_l, genus_via_discriminant, n_points_lower, split_certified};

use super::{HarnessError, RationalOracle};

/// One generated field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u32,
    pub g: u64,
    pub n_lower: u64,
    /// Conductor exponent at `P`.
    pub n: usize,
    pub l: u32,
    pub s1: u32,
    pub h_s: u64,
    pub g_k: u64,
    pub eps: bool,
    pub source: LambdaSource,
    /// Whether `n_lower` is certified to be the exact count.
    pub exact: bool,
    pub description: String,
    /// `I_S` for sets over `F_q(x)`.
    pub set: Option<Vec<u32>>,
}

impl TableRow {
    /// Recomputes genus and place count from the stored description.
    pub fn revalidate(&self) -> Result<(), HarnessError> {
        let (p, e) = prime_power(u64::from(self.q)).ok_or_else(|| HarnessError::Revalidation(format!("q = {}", self.q)))?;
        let desc = Description::parse(&self.description)
            .ok_or_else(|| HarnessError::Revalidation(format!("description {:?}", self.description)))?;
        let lam = lambda_reaching(&desc, p, e, self.l);
        let n = lam.conductor_exponent(self.l)?;
        let g = genus_l(self.g_k, self.h_s, &lam, self.l)?;
        let g2 = genus_via_discriminant(self.g_k, self.h_s, &lam, self.l)?;
        let count = n_points_lower(self.h_s, p, self.l, u64::from(self.s1), self.eps);
        if n != self.n || g != i128::from(self.g) || g2 != g || count != self.n_lower {
            return Err(HarnessError::Revalidation(format!(
                "stored (g {}, N {}, n {}), recomputed (g {g}/{g2}, N {count}, n {n})",
                self.g, self.n_lower, self.n
            )));
        }
        Ok(())
    }
}

/// `lambda` from a description, long enough to reach `l`.
pub fn lambda_reaching(desc: &Description, p: u32, e: u32, l: u32) -> LambdaSeq {
    let mut n_max = (l + desc.rank() as u32).div_ceil(e) as usize + 2;
    loop {
        let lam = lambda_seq_b(desc, p, e, n_max);
        if lam.conductor_exponent(l).is_ok() {
            return lam;
        }
        n_max *= 2;
    }
}

/// Sets of rational places of `F_q(x)` containing the zero of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetFamily {
    /// One initial segment `{0, w, .., w^{s-2}}` per size; enough when `lambda` depends
    /// only on `|S|`.
    Sizes(Vec<u32>),
    Sets(Vec<RationalSet>),
}

/// A ground curve with `S` given by the first `r` units of a unit system.
#[derive(Debug, Clone)]
pub struct CurveGround {
    pub curve: PlaneCurve,
    pub place: PlaceSpec,
    pub units: UnitSystem,
    pub r: usize,
    pub h_s: u64,
    /// `h_S = h_{S u {P}}`.
    pub eps: bool,
}

#[derive(Debug, Clone)]
pub enum Ground {
    Rational { q: u32, family: SetFamily },
    Curve(Box<CurveGround>),
}

/// Computes every row for the given ground and range of `l`, ordered by genus and then by
/// decreasing place count.
pub fn generate_table(ground: &Ground, ls: RangeInclusive<u32>) -> Result<Vec<TableRow>, HarnessError> {
    let mut rows = match ground {
        Ground::Rational { q, family } => rational_rows(*q, family, ls)?,
        Ground::Curve(c) => curve_rows(c, ls)?,
    };
    rows.sort_by(|a, b| a.g.cmp(&b.g).then(b.n_lower.cmp(&a.n_lower)).then(a.l.cmp(&b.l)).then(a.s1.cmp(&b.s1)));
    Ok(rows)
}

fn rational_rows(q: u32, family: &SetFamily, ls: RangeInclusive<u32>) -> Result<Vec<TableRow>, HarnessError> {
    let ctx = FieldCtx::with_order(u64::from(q))?;
    let sets = match family {
        SetFamily::Sizes(sizes) => {
            sizes.iter().map(|&s| RationalSet::initial_segment(&ctx, s)).collect::<Result<Vec<_>, _>>()?
        }
        SetFamily::Sets(sets) => sets.clone(),
    };
    let per_set: Vec<Result<Vec<TableRow>, HarnessError>> = sets
        .par_iter()
        .map_init(
            || RationalOracle::new(ctx.clone()),
            |oracle, set| {
                ls.clone().map(|l| rational_row(oracle, set, l)).collect::<Result<Vec<_>, _>>()
            },
        )
        .collect();
    let mut rows = Vec::new();
    for r in per_set {
        rows.extend(r?);
    }
    Ok(rows)
}

/// The field `L_{l,S}` over `F_q(x)`, with `N` certified through the enlarged sets.
pub fn rational_row(oracle: &mut RationalOracle, set: &RationalSet, l: u32) -> Result<TableRow, HarnessError> {
    let ctx = oracle.ctx().clone();
    let (desc, source) = oracle.description(set)?;
    let lam = lambda_reaching(&desc, ctx.p(), ctx.e(), l);
    let n = lam.conductor_exponent(l)?;
    let exact = rational_split_certified(oracle, set, l, n)?;
    let inv = field_invariants(u64::from(ctx.q()), 0, 1, &lam, l, u64::from(set.size()), true, exact)?;
    Ok(TableRow {
        q: ctx.q(),
        g: inv.genus,
        n_lower: inv.n_lower,
        n: inv.n,
        l,
        s1: set.size(),
        h_s: 1,
        g_k: 0,
        eps: true,
        source,
        exact,
        description: desc.to_string(),
        set: Some(set.exponents().to_vec()),
    })
}

/// `l > lambda_{S u {Q}}^(n)` for every rational `Q` of `F_q(x)` outside `S` and the pole.
pub fn rational_split_certified(
    oracle: &mut RationalOracle,
    set: &RationalSet,
    l: u32,
    n: usize,
) -> Result<bool, HarnessError> {
    let ctx = oracle.ctx().clone();
    let mut values = Vec::new();
    for j in (1..ctx.q()).filter(|j| !set.exponents().contains(j)) {
        let mut exps = set.exponents().to_vec();
        exps.push(j);
        let bigger = RationalSet::from_exponents(&ctx, &exps)?;
        let lam = oracle.lambda(&bigger, n)?;
        values.push(lam.value(n).expect("computed to n"));
    }
    Ok(split_certified(l, values))
}

fn curve_rows(c: &CurveGround, ls: RangeInclusive<u32>) -> Result<Vec<TableRow>, HarnessError> {
    let f = c.curve.field();
    let (p, e) = (f.p(), f.e());
    let desc = describe_units(&c.curve, &c.place, &c.units.prefix(c.r), None)?.description;
    let s1 = c.r as u32 + 1;
    let lam = lambda_reaching(&desc, p, e, *ls.end());
    let enlarged = curve_enlarged(c, lam.computed_to())?;
    ls.map(|l| {
        let n = lam.conductor_exponent(l)?;
        let exact = enlarged.as_ref().is_some_and(|big| big.value(n).is_some_and(|v| l > v));
        let inv = field_invariants(u64::from(f.q()), u64::from(c.curve.genus()), c.h_s, &lam, l, u64::from(s1), c.eps, exact)?;
        Ok(TableRow {
            q: f.q(),
            g: inv.genus,
            n_lower: inv.n_lower,
            n,
            l,
            s1,
            h_s: c.h_s,
            g_k: u64::from(c.curve.genus()),
            eps: c.eps,
            source: LambdaSource::MethodB,
            exact,
            description: desc.to_string(),
            set: None,
        })
    })
    .collect()
}

/// `lambda_{S u {Q}}` when exactly one rational place `Q` lies outside `S u {P}` and the
/// unit system carries the unit for it as unit `r + 1`.
fn curve_enlarged(c: &CurveGround, n_max: usize) -> Result<Option<LambdaSeq>, HarnessError> {
    let rational = c.curve.count_points(1)?;
    let outside = rational.saturating_sub(c.r as u64 + 2);
    if outside == 0 {
        let f = c.curve.field();
        // nothing left to split: a sequence that never reaches l
        return Ok(Some(LambdaSeq::from_decrements(f.p(), f.e(), n_max, None, LambdaSource::MethodB, |_| f.e())));
    }
    if outside > 1 || c.units.units.len() <= c.r {
        return Ok(None);
    }
    let f = c.curve.field();
    let desc = describe_units(&c.curve, &c.place, &c.units.prefix(c.r + 1), None)?.description;
    Ok(Some(lambda_seq_b(&desc, f.p(), f.e(), n_max)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE_CURVE: &str = include_str!("../../data/example_curve.txt");
    pub(crate) const EXAMPLE_UNITS: &str = include_str!("../../data/example_units.txt");

    #[test]
    fn q2_two_places() {
        let rows = generate_table(&Ground::Rational { q: 2, family: SetFamily::Sizes(vec![2]) }, 1..=8).unwrap();
        let pairs: Vec<(u64, u64)> = rows.iter().map(|r| (r.g, r.n_lower)).collect();
        assert_eq!(pairs, [(1, 5), (5, 9), (15, 17), (39, 33), (103, 65), (247, 129), (567, 257), (1271, 513)]);
        assert!(rows.iter().all(|r| r.exact && r.revalidate().is_ok()));
    }

    #[test]
    fn q5_full_set() {
        let rows = generate_table(&Ground::Rational { q: 5, family: SetFamily::Sizes(vec![5]) }, 1..=2).unwrap();
        let pairs: Vec<(u64, u64)> = rows.iter().map(|r| (r.g, r.n_lower)).collect();
        assert_eq!(pairs, [(10, 26), (70, 126)]);
    }

    #[test]
    fn example_curve_table() {
        let curve = PlaneCurve::parse(EXAMPLE_CURVE).unwrap();
        let units = UnitSystem::parse(curve.field(), EXAMPLE_UNITS).unwrap();
        let place = PlaceSpec::parse(&curve, "affine:0,0").unwrap();
        let ground = Ground::Curve(Box::new(CurveGround { curve, place, units, r: 2, h_s: 1, eps: true }));
        let rows = generate_table(&ground, 1..=9).unwrap();
        let g: Vec<u64> = rows.iter().map(|r| r.g).collect();
        let n: Vec<u64> = rows.iter().map(|r| r.n_lower).collect();
        assert_eq!(g, [4, 10, 28, 68, 164, 388, 868, 1892, 4068]);
        assert_eq!(n, [7, 13, 25, 49, 97, 193, 385, 769, 1537]);
        assert!(rows.iter().all(|r| r.exact));
        assert_eq!(rows[1].description, "t^2 + t^5");
    }

    #[test]
    fn tampered_row_fails_revalidation() {
        let mut rows = generate_table(&Ground::Rational { q: 3, family: SetFamily::Sizes(vec![3]) }, 5..=5).unwrap();
        assert_eq!((rows[0].g, rows[0].n_lower, rows[0].n), (987, 730, rows[0].n));
        rows[0].g += 1;
        assert!(rows[0].revalidate().is_err());
    }
}
