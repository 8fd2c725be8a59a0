//! Candidate sets of rational places for a prescribed `(l, |S|, n, g)`.
//!
//! Affine maps `x -> ax + b` fix the pole of `x`, so every candidate is normalized to
//! contain the zero of `x` and, from size two on, the place `x = 1` (exponent `q - 1`).

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ffield::{FieldCtx, Fq};
use crate::lambda::{p_free_part, LambdaSeq, LambdaSource};
use crate::method_a::{e_profile, RationalSet};
use crate::raygenus::genus_l;

/// Largest number of cosets or fibres whose subsets are enumerated in full.
const SUBSET_LIMIT: usize = 14;
/// Swaps without improvement before a local search restarts.
const STALL: usize = 400;

/// What a candidate must reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub l: u32,
    pub s: u32,
    pub n: Option<usize>,
    pub g: u64,
}

/// Exponent set of `{(a - b) / (c - b)}` for the first two elements `b`, `c`; `None` when
/// the elements repeat.
pub fn affine_normal(ctx: &FieldCtx, elems: &[Fq]) -> Option<Vec<u32>> {
    let (&b, rest) = elems.split_first()?;
    let Some(&c) = rest.first() else { return Some(Vec::new()) };
    let span = ctx.sub(c, b);
    if span.is_zero() {
        return None;
    }
    let scale = ctx.inv(span);
    let mut exps = Vec::with_capacity(rest.len());
    for &a in rest {
        exps.push(ctx.dlog(ctx.mul(ctx.sub(a, b), scale)).ok()?);
    }
    exps.sort_unstable();
    exps.dedup();
    (exps.len() == rest.len()).then_some(exps)
}

/// `Tr_{F_q / F_{p^k}}(x)` for `k | e`.
fn trace_to(ctx: &FieldCtx, x: Fq, k: u32) -> Fq {
    let step = i64::from(ctx.p()).pow(k);
    let mut acc = x;
    let mut y = x;
    for _ in 1..ctx.e() / k {
        y = ctx.pow(y, step);
        acc = ctx.add(acc, y);
    }
    acc
}

/// Every union of `t` blocks when there are few blocks, else the first `t`.
fn unions(blocks: &[Vec<Fq>], t: usize, base: &[Fq], out: &mut Vec<Vec<Fq>>) {
    if t == 0 || t > blocks.len() {
        return;
    }
    let push = |chosen: &mut dyn Iterator<Item = &Vec<Fq>>, out: &mut Vec<Vec<Fq>>| {
        let mut set = base.to_vec();
        chosen.for_each(|b| set.extend_from_slice(b));
        out.push(set);
    };
    if blocks.len() <= SUBSET_LIMIT {
        for mask in 0u32..1 << blocks.len() {
            if mask.count_ones() as usize == t {
                push(&mut blocks.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| b), out);
            }
        }
    } else {
        push(&mut blocks[..t].iter(), out);
    }
}

/// Sets of size `s` with arithmetic structure: initial segments in index order, unions of
/// multiplicative cosets and of fibres of subfield traces and norms.
pub fn structured_sets(ctx: &FieldCtx, s: usize) -> Vec<Vec<Fq>> {
    let q = ctx.q() as usize;
    let zero = [ctx.from_index(0)];
    let mut out = vec![(0..s as u32).map(|i| ctx.from_index(i)).collect::<Vec<_>>()];
    for k in (1..ctx.e()).filter(|k| ctx.e().is_multiple_of(*k)) {
        let qk = (ctx.p() as usize).pow(k);
        let mut by_trace: BTreeMap<u32, Vec<Fq>> = BTreeMap::new();
        let mut by_norm: BTreeMap<u32, Vec<Fq>> = BTreeMap::new();
        for x in ctx.elements() {
            by_trace.entry(trace_to(ctx, x, k).index()).or_default().push(x);
            if !x.is_zero() {
                by_norm.entry(ctx.pow(x, ((q - 1) / (qk - 1)) as i64).index()).or_default().push(x);
            }
        }
        let fibre = q / qk;
        if s.is_multiple_of(fibre) {
            unions(&by_trace.into_values().collect::<Vec<_>>(), s / fibre, &[], &mut out);
        }
        let norms: Vec<Vec<Fq>> = by_norm.into_values().collect();
        let fibre = (q - 1) / (qk - 1);
        for base in [&zero[..], &[]] {
            let rest = s - base.len();
            if rest.is_multiple_of(fibre) {
                unions(&norms, rest / fibre, base, &mut out);
            }
        }
    }
    for d in (2..q - 1).filter(|d| (q - 1).is_multiple_of(*d)) {
        let count = (q - 1) / d;
        let cosets: Vec<Vec<Fq>> = (0..count)
            .map(|c| (0..d).map(|h| ctx.omega_pow((c + h * count) as i64)).collect())
            .collect();
        for base in [&zero[..], &[]] {
            let rest = s - base.len();
            if rest.is_multiple_of(d) {
                unions(&cosets, rest / d, base, &mut out);
            }
        }
    }
    out.retain(|set| set.len() == s);
    out
}

/// `x` in coordinates with respect to `basis`, from the base-`p` digits of `i`.
fn combination(ctx: &FieldCtx, basis: &[Fq], mut i: u32) -> Fq {
    let mut acc = ctx.from_index(0);
    for &b in basis {
        acc = ctx.add(acc, ctx.mul(ctx.from_int(i64::from(i % ctx.p())), b));
        i /= ctx.p();
    }
    acc
}

fn random_basis(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Vec<Fq> {
    loop {
        let basis: Vec<Fq> = (0..ctx.e()).map(|_| ctx.from_index(rng.gen_range(1..ctx.q()))).collect();
        let span: HashSet<u32> = (0..ctx.q()).map(|i| combination(ctx, &basis, i).index()).collect();
        if span.len() == ctx.q() as usize {
            return basis;
        }
    }
}

/// Seeded sets built from random linear structure: index order in a random basis, a
/// subspace padded with random points, and zero sets of `Tr(sum c_i a^{d_i})`, quadratic forms among them, trimmed or
/// padded to size `s`.
pub fn linear_sets(ctx: &FieldCtx, s: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Fq>> {
    let q = ctx.q();
    let mut degrees: Vec<u32> = (1..q).filter(|d| d % ctx.p() != 0).take(8).collect();
    let powers: Vec<u32> = (0..ctx.e()).map(|i| ctx.p().pow(i)).collect();
    for (i, a) in powers.iter().enumerate() {
        for b in &powers[i..] {
            if a + b < q && !degrees.contains(&(a + b)) {
                degrees.push(a + b);
            }
        }
    }
    let mut out = Vec::with_capacity(count);
    for t in 0..count {
        let set = match t % 4 {
            0 => {
                let basis = random_basis(ctx, rng);
                (0..s as u32).map(|i| combination(ctx, &basis, i)).collect()
            }
            1 => {
                let basis = random_basis(ctx, rng);
                let mut dim = 1;
                while dim * ctx.p() <= s as u32 {
                    dim *= ctx.p();
                }
                let mut set: Vec<Fq> = (0..dim).map(|i| combination(ctx, &basis, i)).collect();
                let mut rest: Vec<u32> = (dim..q).collect();
                rest.shuffle(rng);
                set.extend(rest[..s - dim as usize].iter().map(|&i| combination(ctx, &basis, i)));
                set
            }
            _ => trace_zero_set(ctx, s, &degrees, rng),
        };
        out.push(set);
    }
    out
}

fn trace_zero_set(ctx: &FieldCtx, s: usize, degrees: &[u32], rng: &mut ChaCha8Rng) -> Vec<Fq> {
    let equations = if rng.gen_bool(0.7) { 1 } else { 2 };
    let mut zero: Vec<Fq> = ctx.elements().collect();
    for _ in 0..equations {
        let k = rng.gen_range(1..=3.min(degrees.len()));
        let window = rng.gen_range(k..=degrees.len());
        let chosen: Vec<u32> = degrees[..window].choose_multiple(rng, k).copied().collect();
        let terms: Vec<(u32, Fq)> = chosen.into_iter().map(|d| (d, ctx.from_index(rng.gen_range(1..ctx.q())))).collect();
        zero.retain(|&a| {
            let v = terms.iter().fold(ctx.from_index(0), |v, &(d, c)| ctx.add(v, ctx.mul(c, ctx.pow(a, i64::from(d)))));
            trace_to(ctx, v, 1).is_zero()
        });
    }
    zero.shuffle(rng);
    if zero.len() < s {
        let inside: HashSet<u32> = zero.iter().map(|x| x.index()).collect();
        let mut rest: Vec<Fq> = ctx.elements().filter(|x| !inside.contains(&x.index())).collect();
        rest.shuffle(rng);
        zero.extend_from_slice(&rest[..s - zero.len()]);
    }
    zero.truncate(s);
    zero
}

/// Distance of the Method-A estimate of `(n, g)` from the target; zero on a hit.
fn distance(ctx: &FieldCtx, exps: &[u32], target: &Target) -> u64 {
    let Ok(set) = RationalSet::from_exponents(ctx, exps) else { return u64::MAX };
    let prof = e_profile(ctx, &set);
    let p = u64::from(ctx.p());
    let horizon = target.n.unwrap_or(0).max((target.l + target.s).div_ceil(ctx.e()) as usize) + 4;
    let lam = LambdaSeq::from_decrements(ctx.p(), ctx.e(), horizon, None, LambdaSource::MethodA, |n| {
        prof.e_s(p_free_part(n, p))
    });
    let Ok(n) = lam.conductor_exponent(target.l) else { return u64::MAX };
    let Ok(g) = genus_l(0, 1, &lam, target.l) else { return u64::MAX };
    let dn = target.n.map_or(0, |m| m.abs_diff(n) as u64);
    1000 * dn + g.abs_diff(i128::from(target.g)) as u64
}

/// Hill climbing by swapping cosets of the subgroup of order `block` in `F_q^*`, on the
/// estimate of `(n, g)`. The coset of `1` always stays in `A_S`. Restarts from `starts`
/// (used only for `block = 1`) and then from random sets; returns a set whose estimate
/// hits the target.
pub fn local_search(
    ctx: &FieldCtx,
    target: &Target,
    block: u32,
    starts: &[Vec<u32>],
    evals: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<u32>> {
    let q1 = ctx.q() - 1;
    if block == 0 || !q1.is_multiple_of(block) || target.s < 2 || !(target.s - 1).is_multiple_of(block) {
        return None;
    }
    let classes = q1 / block;
    let k = ((target.s - 1) / block - 1) as usize;
    if k == 0 || k + 1 >= classes as usize {
        return None;
    }
    let members = |c: u32| (0..block).map(move |h| if c == 0 && h == 0 { q1 } else { c + h * classes });
    let expand = |chosen: &[u32]| -> Vec<u32> { chosen.iter().chain([&0]).flat_map(|&c| members(c)).collect() };
    let mut left = evals;
    let mut restart = 0;
    while left > 0 {
        let mut free: Vec<u32> = match starts.get(restart).filter(|_| block == 1) {
            Some(start) => start.iter().copied().filter(|&j| j != q1).collect(),
            None => Vec::new(),
        };
        restart += 1;
        if free.len() != k {
            free = (1..classes).collect();
            free.shuffle(rng);
            free.truncate(k);
        }
        let chosen: HashSet<u32> = free.iter().copied().collect();
        let mut outside: Vec<u32> = (1..classes).filter(|c| !chosen.contains(c)).collect();
        let mut current = free;
        let mut score = distance(ctx, &expand(&current), target);
        let mut stall = 0;
        while score != 0 && left > 0 && stall < STALL {
            left -= 1;
            let i = rng.gen_range(0..k);
            let o = rng.gen_range(0..outside.len());
            std::mem::swap(&mut current[i], &mut outside[o]);
            let next = distance(ctx, &expand(&current), target);
            if next < score {
                stall = 0;
                score = next;
            } else if next == score {
                stall += 1;
            } else {
                std::mem::swap(&mut current[i], &mut outside[o]);
                stall += 1;
            }
        }
        if score == 0 {
            let mut set = expand(&current);
            set.sort_unstable();
            return Some(set);
        }
    }
    None
}

/// Seeded generator for a row.
pub fn row_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_normal_form() {
        let ctx = FieldCtx::with_order(9).unwrap();
        let elems: Vec<Fq> = [3, 5, 7].iter().map(|&i| ctx.from_index(i)).collect();
        let exps = affine_normal(&ctx, &elems).unwrap();
        assert_eq!(exps.len(), 2);
        assert!(exps.contains(&8));
        assert!(affine_normal(&ctx, &[elems[0], elems[0]]).is_none());
    }

    #[test]
    fn structured_sets_have_the_size() {
        let ctx = FieldCtx::with_order(16).unwrap();
        for s in [4, 5, 6, 9] {
            let sets = structured_sets(&ctx, s);
            assert!(sets.len() > 1);
            for set in &sets {
                assert_eq!(set.len(), s);
                assert!(affine_normal(&ctx, set).is_some());
            }
        }
    }

    #[test]
    fn linear_sets_are_distinct_points() {
        let ctx = FieldCtx::with_order(27).unwrap();
        let mut rng = row_rng(3);
        for set in linear_sets(&ctx, 10, 40, &mut rng) {
            assert_eq!(set.len(), 10);
            assert!(affine_normal(&ctx, &set).is_some());
        }
    }

    #[test]
    fn local_search_hits_a_reachable_target() {
        let ctx = FieldCtx::with_order(16).unwrap();
        let set = RationalSet::from_exponents(&ctx, &[1, 2, 4, 15]).unwrap();
        let lam = crate::method_b::lambda_seq_b(
            &crate::harness::RationalOracle::new(ctx.clone()).description(&set).unwrap().0,
            2,
            4,
            20,
        );
        let target = Target { l: 2, s: 5, n: Some(lam.conductor_exponent(2).unwrap()), g: genus_l(0, 1, &lam, 2).unwrap() as u64 };
        let hit = local_search(&ctx, &target, 1, &[], 5000, &mut row_rng(1)).unwrap();
        assert_eq!(distance(&ctx, &hit, &target), 0);
    }
}
