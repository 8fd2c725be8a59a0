//! Distinct descriptions `delta_S` over all sets `S` of rational places of `F_q(x)`.
//!
//! The affine maps `x -> a x + b` fix the pole of `x` and preserve `delta_S`, so it is
//! enough to take sets with `0` in `S` and, once `|S| >= 2`, `1` in `A_S`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::ffield::FieldCtx;
use crate::lambda::Description;
use crate::method_a::RationalSet;

use super::{HarnessError, RationalOracle};

/// Default bound on the number of sets visited.
pub const DEFAULT_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusOptions {
    pub q: u32,
    /// Restrict to these `|S|`.
    pub sizes: Option<RangeInclusive<u32>>,
    /// Drop the scaling normalization and visit every set containing `0`.
    pub full: bool,
    /// Also run Method B where Method A is proven and compare.
    pub cross_check: bool,
    pub cap: u128,
}

impl CensusOptions {
    pub fn new(q: u32) -> Self {
        CensusOptions { q, sizes: None, full: false, cross_check: false, cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptionCount {
    pub description: String,
    pub sets: u64,
}

/// Sets at one `|S|` where Method A is or is not proven.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SizeCount {
    pub size: u32,
    pub a_valid: u64,
    pub a_invalid: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub set: Vec<u32>,
    pub method_a: String,
    pub method_b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub q: u32,
    pub sets: u64,
    /// Descriptions of sets where Method A is proven.
    pub method_a: Vec<DescriptionCount>,
    /// Descriptions found only through Method B.
    pub method_b_only: Vec<DescriptionCount>,
    pub by_size: Vec<SizeCount>,
    pub mismatches: Vec<Mismatch>,
}

impl CensusReport {
    pub fn distinct(&self) -> usize {
        self.method_a.len() + self.method_b_only.len()
    }
}

#[derive(Default)]
struct Tally {
    a: BTreeMap<Description, u64>,
    b: BTreeMap<Description, u64>,
    sizes: BTreeMap<u32, SizeCount>,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (d, c) in other.a {
            *self.a.entry(d).or_default() += c;
        }
        for (d, c) in other.b {
            *self.b.entry(d).or_default() += c;
        }
        for (s, c) in other.sizes {
            let e = self.sizes.entry(s).or_insert(SizeCount { size: s, ..Default::default() });
            e.a_valid += c.a_valid;
            e.a_invalid += c.a_invalid;
        }
        self.mismatches.extend(other.mismatches);
        self
    }
}

/// Exponent sets visited by the census, in a fixed order.
fn enumerate(opts: &CensusOptions) -> Result<Vec<Vec<u32>>, HarnessError> {
    let q = opts.q;
    if !(2..=32).contains(&q) {
        return Err(HarnessError::CapExceeded { q, count: 0, cap: opts.cap });
    }
    let free: Vec<u32> = if opts.full { (1..q).collect() } else { (1..q - 1).collect() };
    let count = 1u128 << free.len();
    if count > opts.cap {
        return Err(HarnessError::CapExceeded { q, count, cap: opts.cap });
    }
    let wanted = |size: u32| opts.sizes.as_ref().is_none_or(|r| r.contains(&size));
    let mut out = Vec::new();
    if !opts.full && wanted(1) {
        out.push(Vec::new());
    }
    for mask in 0..count as u64 {
        let mut exps: Vec<u32> =
            free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j).collect();
        if !opts.full {
            exps.push(q - 1);
        }
        if wanted(exps.len() as u32 + 1) {
            out.push(exps);
        }
    }
    Ok(out)
}

/// Runs the census on the current rayon pool.
pub fn census(opts: &CensusOptions) -> Result<CensusReport, HarnessError> {
    let ctx = FieldCtx::with_order(u64::from(opts.q))?;
    let sets = enumerate(opts)?;
    let tally = sets
        .par_iter()
        .map_init(
            || RationalOracle::new(ctx.clone()),
            |oracle, exps| -> Result<Tally, HarnessError> {
                let set = RationalSet::from_exponents(&ctx, exps)?;
                let prof = oracle.profile(&set);
                let mut t = Tally::default();
                let size = t.sizes.entry(set.size()).or_insert(SizeCount { size: set.size(), ..Default::default() });
                if prof.fully_valid() {
                    size.a_valid += 1;
                    let d = prof.description();
                    if opts.cross_check {
                        let b = oracle.description_b(&set)?;
                        if b != d {
                            t.mismatches.push(Mismatch {
                                set: exps.clone(),
                                method_a: d.to_string(),
                                method_b: b.to_string(),
                            });
                        }
                    }
                    t.a.insert(d, 1);
                } else {
                    size.a_invalid += 1;
                    t.b.insert(oracle.description_b(&set)?, 1);
                }
                Ok(t)
            },
        )
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let Tally { a, b, sizes, mut mismatches } = tally;
    mismatches.sort_by(|x, y| x.set.cmp(&y.set));
    let listed = |m: BTreeMap<Description, u64>| -> Vec<DescriptionCount> {
        m.into_iter().map(|(d, sets)| DescriptionCount { description: d.to_string(), sets }).collect()
    };
    let b_only: BTreeMap<Description, u64> = b.into_iter().filter(|(d, _)| !a.contains_key(d)).collect();
    Ok(CensusReport {
        q: opts.q,
        sets: sets.len() as u64,
        method_a: listed(a),
        method_b_only: listed(b_only),
        by_size: sizes.into_values().collect(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_descriptions_are_initial_runs() {
        let report = census(&CensusOptions::new(5)).unwrap();
        let found: Vec<&str> = report.method_a.iter().map(|d| d.description.as_str()).collect();
        assert_eq!(found, ["0", "t", "t + t^2", "t + t^2 + t^3", "t + t^2 + t^3 + t^4"]);
        assert!(report.method_b_only.is_empty());
        assert_eq!(report.sets, 1 + 8);
    }

    #[test]
    fn full_enumeration_agrees_with_the_normalized_one() {
        for q in [4u32, 8, 9] {
            let norm = census(&CensusOptions::new(q)).unwrap();
            let full = census(&CensusOptions { full: true, ..CensusOptions::new(q) }).unwrap();
            let names = |r: &CensusReport| {
                let mut v: Vec<String> =
                    r.method_a.iter().chain(&r.method_b_only).map(|d| d.description.clone()).collect();
                v.sort();
                v
            };
            assert_eq!(names(&norm), names(&full), "q = {q}");
        }
    }

    #[test]
    fn cross_check_small_fields() {
        for q in [2u32, 3, 4, 7, 8, 9] {
            let r = census(&CensusOptions { cross_check: true, ..CensusOptions::new(q) }).unwrap();
            assert!(r.mismatches.is_empty(), "q = {q}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = census(&CensusOptions { cap: 16, ..CensusOptions::new(8) }).unwrap_err();
        assert!(matches!(err, HarnessError::CapExceeded { q: 8, count: 64, cap: 16 }));
        assert!(census(&CensusOptions::new(64)).is_err());
    }
}
