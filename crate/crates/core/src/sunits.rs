//! Hermite normal forms of valuation matrices, lattice indices of `S`-unit divisors and
//! the resulting `S`-class numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::QSqrtNum;
use crate::curve::{BiPoly, CurveError, PlaceSpec, PlaneCurve};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SUnitError {
    #[error("row {row} has weighted valuation sum {sum}, not 0")]
    DegreeRelation { row: usize, sum: i64 },
    #[error("matrix of shape {rows}x{cols} has no maximal minors of the expected size")]
    Shape { rows: usize, cols: usize },
    #[error("{h_k} is not divisible by the regulator {reg}")]
    NonDivisible { h_k: u64, reg: u64 },
    #[error("the first {r} rows of the normal form are not supported on the first {cols} columns")]
    UnsupportedOrdering { r: usize, cols: usize },
    #[error("generators not certified: index {index}, class number {h_k}, bound {bound}")]
    NotCertified { index: String, h_k: u64, bound: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Valuations `v_P(z)` of generators `z` (rows) at the places `P` of `S` (columns).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub degrees: Vec<u32>,
    pub entries: Vec<Vec<i64>>,
}

impl ValuationMatrix {
    /// Rejects rows that violate `sum_j deg(P_j) v_{P_j}(z) = 0`.
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        degrees: Vec<u32>,
        entries: Vec<Vec<i64>>,
    ) -> Result<Self, SUnitError> {
        let cols = degrees.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != cols {
                return Err(SUnitError::Shape { rows: entries.len(), cols: r.len() });
            }
            let sum: i64 = r.iter().zip(&degrees).map(|(v, &d)| v * d as i64).sum();
            if sum != 0 {
                return Err(SUnitError::DegreeRelation { row, sum });
            }
        }
        Ok(ValuationMatrix { row_labels, col_labels, degrees, entries })
    }

    /// Computes the matrix on a curve from rational places and polynomial generators.
    pub fn from_curve(
        curve: &PlaneCurve,
        places: &[(String, PlaceSpec)],
        generators: &[(String, BiPoly)],
    ) -> Result<Self, SUnitError> {
        let one = BiPoly::constant(crate::ffield::Fq::ONE);
        let mut entries = Vec::new();
        for (_, g) in generators {
            let row = places
                .iter()
                .map(|(_, pl)| curve.valuation(pl, g, &one))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(row);
        }
        Self::new(
            generators.iter().map(|(n, _)| n.clone()).collect(),
            places.iter().map(|(n, _)| n.clone()).collect(),
            vec![1; places.len()],
            entries,
        )
    }

    pub fn as_bigint(&self) -> Vec<Vec<BigInt>> {
        to_big(&self.entries)
    }
}

pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Representatives used to reduce entries against a pivot `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residues {
    /// `[0, d)`.
    NonNegative,
    /// `(-d/2, d/2]`.
    Symmetric,
}

/// Column order in which pivots are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotOrder {
    /// Upper echelon form, pivots moving right.
    LeftToRight,
    /// Pivots taken from the last column leftwards; the row with the rightmost pivot is
    /// listed last among the nonzero rows, so the first `r` rows avoid the last columns.
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub h: Vec<Vec<BigInt>>,
    /// Unimodular with `u * d = h`.
    pub u: Vec<Vec<BigInt>>,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row Hermite normal form with nonnegative reduced entries above pivots.
pub fn hnf(d: &[Vec<BigInt>]) -> HnfResult {
    hnf_with(d, PivotOrder::LeftToRight, Residues::NonNegative)
}

pub fn hnf_with(d: &[Vec<BigInt>], order: PivotOrder, residues: Residues) -> HnfResult {
    match order {
        PivotOrder::LeftToRight => hnf_upper(d, residues),
        PivotOrder::RightToLeft => {
            let flip = |m: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
                m.iter().map(|r| r.iter().rev().cloned().collect()).collect()
            };
            let cols = d.first().map_or(0, |r| r.len());
            let mut res = hnf_upper(&flip(d), residues);
            res.h = flip(&res.h);
            let rank = res.rank();
            res.h[..rank].reverse();
            res.u[..rank].reverse();
            res.pivots = res.pivots.iter().rev().map(|&c| cols - 1 - c).collect();
            res
        }
    }
}

fn reduce(value: &BigInt, pivot: &BigInt, residues: Residues) -> BigInt {
    // quotient k with value - k*pivot in the chosen residue range
    let mut k = value.div_floor(pivot);
    if residues == Residues::Symmetric {
        let r = value - &k * pivot;
        if &r * 2 > *pivot {
            k += 1;
        }
    }
    k
}

fn row_axpy(target: &mut [BigInt], k: &BigInt, source: &[BigInt]) {
    // target -= k * source
    for (t, s) in target.iter_mut().zip(source) {
        *t -= k * s;
    }
}

fn hnf_upper(d: &[Vec<BigInt>], residues: Residues) -> HnfResult {
    let rows = d.len();
    let cols = d.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<BigInt>> = d.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.. until a single nonzero entry remains
        loop {
            let nonzero: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by(|&&a, &&b| h[a][c].abs().cmp(&h[b][c].abs()).then(a.cmp(&b)))
                .expect("nonempty");
            h.swap(r, best);
            u.swap(r, best);
            if nonzero.len() == 1 {
                break;
            }
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let k = h[i][c].div_floor(&h[r][c]);
                let (hr, ur) = (h[r].clone(), u[r].clone());
                row_axpy(&mut h[i], &k, &hr);
                row_axpy(&mut u[i], &k, &ur);
            }
        }
        if h.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if h[r][c].is_negative() {
            h[r].iter_mut().for_each(|v| *v = -v.clone());
            u[r].iter_mut().for_each(|v| *v = -v.clone());
        }
        for i in 0..r {
            let k = reduce(&h[i][c], &h[r][c], residues);
            if !k.is_zero() {
                let (hr, ur) = (h[r].clone(), u[r].clone());
                row_axpy(&mut h[i], &k, &hr);
                row_axpy(&mut u[i], &k, &ur);
            }
        }
        pivots.push(c);
        r += 1;
    }
    HnfResult { h, u, pivots }
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Index of the row lattice in the degree-zero divisors supported on the columns.
///
/// For `r` rows and `r + 1` columns this is `|minor_j| * gcd(deg) / deg_j` for any
/// column `j` whose deletion leaves a nonzero minor; a square input is read as already
/// having its dependent column removed.
pub fn lattice_index(d: &[Vec<BigInt>], degrees: &[u32]) -> Result<LatticeIndex, SUnitError> {
    let rows = d.len();
    let cols = degrees.len();
    if d.iter().any(|r| r.len() != cols) {
        return Err(SUnitError::Shape { rows, cols });
    }
    if cols == rows {
        let det = determinant(d).abs();
        return Ok(if det.is_zero() { LatticeIndex::Infinite } else { LatticeIndex::Finite(det) });
    }
    if cols != rows + 1 {
        return Err(SUnitError::Shape { rows, cols });
    }
    let g = degrees.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    for (j, &deg) in degrees.iter().enumerate() {
        let minor: Vec<Vec<BigInt>> = d
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let det = determinant(&minor).abs();
        if !det.is_zero() {
            return Ok(LatticeIndex::Finite(det * BigInt::from(g) / BigInt::from(deg)));
        }
    }
    Ok(LatticeIndex::Infinite)
}

/// `h_S = h(K) / reg_S` for a set of rational places.
pub fn s_class_number(h_k: u64, reg_s: u64) -> Result<u64, SUnitError> {
    if reg_s == 0 || !h_k.is_multiple_of(reg_s) {
        return Err(SUnitError::NonDivisible { h_k, reg: reg_s });
    }
    Ok(h_k / reg_s)
}

/// If the generators have index `h(K)` and the class-number bound is below 2, they
/// generate all `S`-units modulo constants and `h_S = 1`.
pub fn certify_generators(h_k: u64, bound: &QSqrtNum, index: &LatticeIndex) -> Result<u64, SUnitError> {
    let ok = matches!(index, LatticeIndex::Finite(n) if n == &BigInt::from(h_k))
        && bound.cmp_int(2) == Ordering::Less;
    if ok {
        Ok(1)
    } else {
        Err(SUnitError::NotCertified { index: index.to_string(), h_k, bound: bound.to_string() })
    }
}

/// Basis of the units supported on the first `r + 1` columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetBasis {
    /// Divisor vectors, restricted to the first `r + 1` columns.
    pub divisors: Vec<Vec<i64>>,
    /// Exponents of the original generators for each basis unit.
    pub exponents: Vec<Vec<i64>>,
}

/// The first `r` rows of a right-to-left normal form and their unit expressions.
pub fn subset_basis(res: &HnfResult, r: usize) -> Result<SubsetBasis, SUnitError> {
    let cols = res.h.first().map_or(0, |row| row.len());
    if r > res.rank() {
        return Err(SUnitError::UnsupportedOrdering { r, cols: r + 1 });
    }
    let small = |v: &BigInt| v.to_i64().expect("entries fit in i64");
    let mut divisors = Vec::new();
    let mut exponents = Vec::new();
    for i in 0..r {
        if res.h[i][r + 1..cols].iter().any(|v| !v.is_zero()) {
            return Err(SUnitError::UnsupportedOrdering { r, cols: r + 1 });
        }
        divisors.push(res.h[i][..=r].iter().map(small).collect());
        exponents.push(res.u[i].iter().map(small).collect());
    }
    Ok(SubsetBasis { divisors, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn worked_matrix() -> Vec<Vec<BigInt>> {
        to_big(&[
            vec![-2, 1, 0, 0, 1],
            vec![-2, 0, 1, 1, 0],
            vec![-5, 0, 2, 0, 3],
            vec![-5, 0, 0, 3, 2],
        ])
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_is_its_own_form() {
        let id = to_big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
    }

    #[test]
    fn worked_matrix_from_the_right() {
        let d = worked_matrix();
        let r = hnf_with(&d, PivotOrder::RightToLeft, Residues::Symmetric);
        assert_eq!(
            r.h,
            to_big(&[
                vec![-13, 13, 0, 0, 0],
                vec![-6, 5, 1, 0, 0],
                vec![4, -5, 0, 1, 0],
                vec![-2, 1, 0, 0, 1],
            ])
        );
        assert_eq!(
            r.u,
            to_big(&[
                vec![13, 6, -3, -2],
                vec![5, 3, -1, -1],
                vec![-5, -2, 1, 1],
                vec![1, 0, 0, 0],
            ])
        );
        assert_eq!(mat_mul(&r.u, &d), r.h);
        assert_eq!(determinant(&r.u).abs(), BigInt::one());
    }

    #[test]
    fn worked_index_and_subsets() {
        let d = worked_matrix();
        assert_eq!(lattice_index(&d, &[1; 5]).unwrap(), LatticeIndex::Finite(13.into()));
        let r = hnf_with(&d, PivotOrder::RightToLeft, Residues::Symmetric);
        let b2 = subset_basis(&r, 2).unwrap();
        assert_eq!(b2.exponents, vec![vec![13, 6, -3, -2], vec![5, 3, -1, -1]]);
        assert_eq!(b2.divisors, vec![vec![-13, 13, 0], vec![-6, 5, 1]]);
        let b1 = subset_basis(&r, 1).unwrap();
        assert_eq!(b1.divisors, vec![vec![-13, 13]]);
        // on four places the units already reach the full index
        let four = subset_basis(&r, 3).unwrap();
        let sub: Vec<Vec<BigInt>> = to_big(&four.divisors);
        assert_eq!(lattice_index(&sub, &[1; 4]).unwrap(), LatticeIndex::Finite(13.into()));
        let std = hnf(&d);
        assert!(subset_basis(&std, 2).is_err());
    }

    #[test]
    fn small_index_examples() {
        let d = to_big(&[vec![-1, 1, 0], vec![-1, 0, 1]]);
        assert_eq!(lattice_index(&d, &[1, 1, 1]).unwrap(), LatticeIndex::Finite(1.into()));
        let d = to_big(&[vec![-1, 1, 0], vec![-2, 2, 0]]);
        assert_eq!(lattice_index(&d, &[1, 1, 1]).unwrap(), LatticeIndex::Infinite);
        // place of degree 2: the divisor (1, 1, -1) has degree 0
        let d = to_big(&[vec![2, 0, -1], vec![0, 2, -1]]);
        assert_eq!(lattice_index(&d, &[1, 1, 2]).unwrap(), LatticeIndex::Finite(2.into()));
        assert!(lattice_index(&d, &[1, 1]).is_err());
    }

    #[test]
    fn class_number_arithmetic() {
        assert_eq!(s_class_number(13, 13).unwrap(), 1);
        assert_eq!(s_class_number(1, 1).unwrap(), 1);
        assert_eq!(s_class_number(13, 1).unwrap(), 13);
        assert!(s_class_number(13, 2).is_err());
        let bound = crate::bounds::hbar(2, 2, 5).unwrap();
        assert_eq!(certify_generators(13, &bound, &LatticeIndex::Finite(13.into())).unwrap(), 1);
        assert!(certify_generators(13, &bound, &LatticeIndex::Finite(26.into())).is_err());
        let big = QSqrtNum::from_int(3, 2);
        assert!(certify_generators(13, &big, &LatticeIndex::Finite(13.into())).is_err());
    }

    #[test]
    fn degree_relation_is_enforced() {
        let ok = ValuationMatrix::new(
            vec!["z".into()],
            vec!["a".into(), "b".into()],
            vec![1, 1],
            vec![vec![1, -1]],
        );
        assert!(ok.is_ok());
        let bad = ValuationMatrix::new(
            vec!["z".into()],
            vec!["a".into(), "b".into()],
            vec![1, 2],
            vec![vec![1, -1]],
        );
        assert_eq!(bad.unwrap_err(), SUnitError::DegreeRelation { row: 0, sum: -1 });
    }

    fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<BigInt>> {
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        for _ in 0..3 * n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b {
                u.swap(0, n - 1);
                continue;
            }
            let k = BigInt::from(rng.gen_range(-3i64..=3));
            let src = u[b].clone();
            row_axpy(&mut u[a], &k, &src);
        }
        u
    }

    fn is_hnf(res: &HnfResult) -> bool {
        let mut last = None;
        for (i, row) in res.h.iter().enumerate() {
            let lead = row.iter().position(|v| !v.is_zero());
            match (lead, i < res.rank()) {
                (Some(c), true) => {
                    if last.is_some_and(|l| c <= l) || !row[c].is_positive() {
                        return false;
                    }
                    for prev in &res.h[..i] {
                        if prev[c].is_negative() || prev[c] >= row[c] {
                            return false;
                        }
                    }
                    last = Some(c);
                }
                (None, false) => {}
                _ => return false,
            }
        }
        true
    }

    proptest! {
        #[test]
        fn normal_form_properties(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d: Vec<Vec<BigInt>> = (0..rows)
                .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
                .collect();
            let res = hnf(&d);
            prop_assert_eq!(mat_mul(&res.u, &d), res.h.clone());
            prop_assert_eq!(determinant(&res.u).abs(), BigInt::one());
            prop_assert!(is_hnf(&res));
            let sym = hnf_with(&d, PivotOrder::RightToLeft, Residues::Symmetric);
            prop_assert_eq!(mat_mul(&sym.u, &d), sym.h.clone());
            prop_assert_eq!(sym.rank(), res.rank());
            // uniqueness: a unimodular change of rows leaves the normal form fixed
            let w = random_unimodular(&mut rng, rows);
            prop_assert_eq!(hnf(&mat_mul(&w, &d)).h, res.h);
        }

        #[test]
        fn index_is_invariant_under_unimodular_rows(seed in any::<u64>(), r in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // rows with zero sum
            let d: Vec<Vec<BigInt>> = (0..r)
                .map(|_| {
                    let mut row: Vec<i64> = (0..r).map(|_| rng.gen_range(-6i64..=6)).collect();
                    row.push(-row.iter().sum::<i64>());
                    row.into_iter().map(BigInt::from).collect()
                })
                .collect();
            let w = random_unimodular(&mut rng, r);
            let degs = vec![1; r + 1];
            prop_assert_eq!(lattice_index(&d, &degs).unwrap(),
                            lattice_index(&mat_mul(&w, &d), &degs).unwrap());
            let res = hnf(&d);
            if res.rank() == r {
                // index equals |det| of the normal form without its last column
                let cut: Vec<Vec<BigInt>> = res.h.iter().map(|row| row[..r].to_vec()).collect();
                prop_assert_eq!(lattice_index(&d, &degs).unwrap(),
                                LatticeIndex::Finite(determinant(&cut).abs()));
            }
        }
    }
}
