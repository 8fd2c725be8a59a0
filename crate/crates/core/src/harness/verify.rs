//! Recomputes the golden corpus and reports per-row outcomes.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::oesterle_nbar;
use crate::curve::{PlaceSpec, PlaneCurve};
use crate::ffield::FieldCtx;
use crate::lambda::LambdaSource;
use crate::method_a::RationalSet;
use crate::method_b::UnitSystem;
use crate::raygenus::{genus_l, n_points_lower};

use super::census::{census, CensusOptions};
use super::corpus::{GoldenCorpus, GoldenRow, RowClass, RowGroup};
use super::table::{generate_table, rational_row, CurveGround, Ground, TableRow};
use super::{search, HarnessError, RationalOracle};

pub const EXAMPLE_CURVE: &str = include_str!("../../data/example_curve.txt");
pub const EXAMPLE_UNITS: &str = include_str!("../../data/example_units.txt");

/// The twelve descriptions over `F_16(x)` that only Method B establishes.
pub const Q16_METHOD_B: [&str; 12] = [
    "2t + t^2",
    "2t + t^3",
    "3t + t^2",
    "3t + t^3",
    "3t + 2t^3",
    "3t + t^2 + t^3",
    "3t + t^2 + 2t^3",
    "3t + t^2 + 2t^3 + t^7",
    "4t + 3t^3 + t^7",
    "4t + 3t^3 + t^5 + t^7",
    "4t + 3t^3 + 2t^5 + t^7",
    "4t + 3t^3 + 2t^5 + 2t^7",
];

/// Local searches per unresolved row, each of `budget` swaps, cycling through coset sizes.
const LOCAL_ROUNDS: usize = 6;

/// Number of Method-A descriptions over `F_16(x)`.
pub const Q16_METHOD_A_COUNT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Restrict to these groups; all when empty.
    pub groups: Vec<RowGroup>,
    /// Sets tried per record row before it is reported unresolved.
    pub budget: usize,
    pub seed: u64,
    /// Include the `q = 16` description census.
    pub census: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { groups: Vec::new(), budget: 4000, seed: 0x5eed, census: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    /// No matching set found within the search budget.
    Unresolved,
    /// External ground field; listed only.
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub row: GoldenRow,
    pub class: RowClass,
    pub status: RowStatus,
    pub computed: Option<TableRow>,
    /// `oesterle_nbar(q, g)`.
    pub bound: u64,
    /// Sets tried before the verdict.
    pub tried: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusCheck {
    pub method_a: usize,
    pub method_b_only: Vec<String>,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    pub mismatches: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<RowOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub unresolved: usize,
    pub excluded: usize,
    pub census: Option<CensusCheck>,
}

impl VerifyReport {
    /// No failed row and, when run, a passing census.
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.census.as_ref().is_none_or(|c| c.pass)
    }
}

/// Verifies the corpus on the current rayon pool.
pub fn verify(corpus: &GoldenCorpus, opts: &VerifyOptions) -> Result<VerifyReport, HarnessError> {
    let selected: Vec<&GoldenRow> =
        corpus.rows.iter().filter(|r| opts.groups.is_empty() || opts.groups.contains(&r.group)).collect();
    let example = if selected.iter().any(|r| r.class() == RowClass::ExampleCurve) {
        Some(example_rows()?)
    } else {
        None
    };
    let rows: Vec<RowOutcome> = selected
        .par_iter()
        .map(|row| check_row(row, example.as_deref(), opts))
        .collect::<Result<_, _>>()?;
    let count = |s: RowStatus| rows.iter().filter(|o| o.status == s).count();
    let census = if opts.census { Some(census_check()?) } else { None };
    Ok(VerifyReport {
        passed: count(RowStatus::Pass),
        failed: count(RowStatus::Fail),
        unresolved: count(RowStatus::Unresolved),
        excluded: count(RowStatus::Excluded),
        rows,
        census,
    })
}

/// The genus-2 ground curve with `S` spanned by its first two units.
pub fn example_ground() -> Result<CurveGround, HarnessError> {
    let curve = PlaneCurve::parse(EXAMPLE_CURVE)?;
    let units = UnitSystem::parse(curve.field(), EXAMPLE_UNITS)?;
    let place = PlaceSpec::parse(&curve, "affine:0,0")?;
    Ok(CurveGround { curve, place, units, r: 2, h_s: 1, eps: true })
}

fn example_rows() -> Result<Vec<TableRow>, HarnessError> {
    generate_table(&Ground::Curve(Box::new(example_ground()?)), 1..=9)
}

/// The `q = 16` census against the published list.
pub fn census_check() -> Result<CensusCheck, HarnessError> {
    let report = census(&CensusOptions { cross_check: true, ..CensusOptions::new(16) })?;
    let found: Vec<String> = report.method_b_only.iter().map(|d| d.description.clone()).collect();
    let missing: Vec<String> =
        Q16_METHOD_B.iter().filter(|d| !found.iter().any(|f| f == *d)).map(|d| d.to_string()).collect();
    let unexpected: Vec<String> = found.iter().filter(|f| !Q16_METHOD_B.contains(&f.as_str())).cloned().collect();
    let pass = report.method_a.len() == Q16_METHOD_A_COUNT
        && missing.is_empty()
        && unexpected.is_empty()
        && report.mismatches.is_empty();
    Ok(CensusCheck {
        method_a: report.method_a.len(),
        method_b_only: found,
        missing,
        unexpected,
        mismatches: report.mismatches.len(),
        pass,
    })
}

fn outcome(row: &GoldenRow, status: RowStatus, computed: Option<TableRow>, tried: usize, detail: String) -> RowOutcome {
    RowOutcome {
        row: row.clone(),
        class: row.class(),
        status,
        computed,
        bound: oesterle_nbar(u64::from(row.q), row.g),
        tried,
        detail,
    }
}

fn check_row(row: &GoldenRow, example: Option<&[TableRow]>, opts: &VerifyOptions) -> Result<RowOutcome, HarnessError> {
    match row.class() {
        RowClass::External => Ok(outcome(row, RowStatus::Excluded, None, 0, "external ground field".into())),
        RowClass::ExampleCurve => {
            let computed = example.and_then(|rows| rows.iter().find(|r| r.l == row.l)).cloned();
            Ok(judge(row, computed, 1, "example curve"))
        }
        RowClass::Rational => search_rational(row, opts),
    }
}

/// Pass when genus, lower place count and (if printed) conductor agree, and the count
/// respects the explicit-formula bound.
fn judge(row: &GoldenRow, computed: Option<TableRow>, tried: usize, how: &str) -> RowOutcome {
    let Some(c) = computed else {
        return outcome(row, RowStatus::Fail, None, tried, format!("{how}: nothing computed"));
    };
    let bound = oesterle_nbar(u64::from(row.q), row.g);
    let mut diffs = Vec::new();
    if c.g != row.g {
        diffs.push(format!("g {} != {}", c.g, row.g));
    }
    if c.n_lower != row.n_lower {
        diffs.push(format!("N {} != {}", c.n_lower, row.n_lower));
    }
    if let Some(n) = row.n.filter(|&n| n != c.n) {
        diffs.push(format!("n {} != {n}", c.n));
    }
    if c.n_lower > bound {
        diffs.push(format!("N {} exceeds the bound {bound}", c.n_lower));
    }
    if let Err(e) = c.revalidate() {
        diffs.push(e.to_string());
    }
    if diffs.is_empty() {
        let exact = if c.exact { "exact" } else { "lower bound" };
        outcome(row, RowStatus::Pass, Some(c.clone()), tried, format!("{how}; {exact}; delta = {}", c.description))
    } else {
        outcome(row, RowStatus::Fail, Some(c), tried, diffs.join("; "))
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// All exponent sets of size `s` with `0` in `S` and `1` in `A_S`, in lexicographic order,
/// when there are at most `budget` of them.
fn exhaustive(q: u32, s: u32, budget: usize) -> Option<Vec<Vec<u32>>> {
    if s <= 1 {
        return Some(vec![Vec::new()]);
    }
    let pool: Vec<u32> = (1..q - 1).collect();
    let k = (s - 2) as usize;
    if binomial(pool.len() as u64, k as u64) > budget as u128 {
        return None;
    }
    let n = pool.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        let mut set: Vec<u32> = idx.iter().map(|&i| pool[i]).collect();
        set.push(q - 1);
        out.push(set);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return Some(out) };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Structured sets, then seeded linear ones, up to `budget` distinct normalized sets.
fn heuristic_sets(ctx: &FieldCtx, s: u32, budget: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let structured = search::structured_sets(ctx, s as usize);
    let linear = search::linear_sets(ctx, s as usize, budget, rng);
    for elems in structured.into_iter().chain(linear) {
        if out.len() == budget {
            break;
        }
        if let Some(exps) = search::affine_normal(ctx, &elems) {
            if seen.insert(exps.clone()) {
                out.push(exps);
            }
        }
    }
    out
}

/// The row for `exps` when its conductor and genus match.
fn try_set(oracle: &mut RationalOracle, row: &GoldenRow, exps: &[u32]) -> Result<Option<TableRow>, HarnessError> {
    let set = RationalSet::from_exponents(oracle.ctx(), exps)?;
    let lam = oracle.lambda_reaching(&set, row.l)?;
    let n = lam.conductor_exponent(row.l)?;
    if row.n.is_some_and(|m| m != n) || genus_l(0, 1, &lam, row.l)? != i128::from(row.g) {
        return Ok(None);
    }
    Ok(Some(rational_row(oracle, &set, row.l)?))
}

fn search_rational(row: &GoldenRow, opts: &VerifyOptions) -> Result<RowOutcome, HarnessError> {
    let ctx = FieldCtx::with_order(u64::from(row.q))?;
    if row.s == 0 || row.s > row.q {
        return Ok(outcome(row, RowStatus::Fail, None, 0, format!("|S| = {} impossible for q = {}", row.s, row.q)));
    }
    let n_target = n_points_lower(1, ctx.p(), row.l, u64::from(row.s), true);
    if n_target != row.n_lower {
        let detail = format!("p^l |S| + 1 = {n_target} differs from {}", row.n_lower);
        return Ok(outcome(row, RowStatus::Fail, None, 0, detail));
    }
    let mut oracle = RationalOracle::new(ctx.clone());
    let found = |t: TableRow, tried: usize, how: &str| {
        let method = match t.source {
            LambdaSource::MethodA => "method A",
            _ => "method B",
        };
        judge(row, Some(t), tried, &format!("{how}, {method}"))
    };
    if let Some(sets) = exhaustive(row.q, row.s, opts.budget) {
        for (i, exps) in sets.iter().enumerate() {
            if let Some(t) = try_set(&mut oracle, row, exps)? {
                return Ok(found(t, i + 1, "exhaustive"));
            }
        }
        return Ok(outcome(row, RowStatus::Fail, None, sets.len(), "no set of this size matches".into()));
    }
    let seed = opts.seed ^ (u64::from(row.q) << 40) ^ (row.g << 20) ^ (u64::from(row.l) << 8) ^ u64::from(row.s);
    let mut rng = search::row_rng(seed);
    let sets = heuristic_sets(&ctx, row.s, opts.budget, &mut rng);
    for (i, exps) in sets.iter().enumerate() {
        if let Some(t) = try_set(&mut oracle, row, exps)? {
            return Ok(found(t, i + 1, "structured"));
        }
    }
    let mut tried = sets.len();
    let target = search::Target { l: row.l, s: row.s, n: row.n, g: row.g };
    let mut starts = sets;
    starts.shuffle(&mut rng);
    let q1 = row.q - 1;
    let blocks: Vec<u32> = (1..q1).filter(|d| q1.is_multiple_of(*d) && (row.s - 1).is_multiple_of(*d)).collect();
    for round in 0..LOCAL_ROUNDS {
        let block = blocks[round % blocks.len()];
        let Some(exps) = search::local_search(&ctx, &target, block, &starts, opts.budget, &mut rng) else { continue };
        tried += 1;
        if let Some(t) = try_set(&mut oracle, row, &exps)? {
            return Ok(found(t, tried, "local search"));
        }
    }
    Ok(outcome(row, RowStatus::Unresolved, None, tried, format!("no match among {tried} sets and {LOCAL_ROUNDS} local searches")))
}
