//! Plane curves `F(x, y) = 0` over `F_q`: point counts, zeta numerator, class number,
//! and local expansions at rational places.
//!
//! Places above `x = infinity` are not computed from the model. They are declared with
//! their degrees and, for a rational place, optionally with the pole orders of `x` and `y`
//! there, which is enough for valuations of functions regular in the affine part.
//!
//! # Curve file format
//!
//! ```text
//! # comments start with '#'
//! field 2 1                    # p e, optionally followed by `modulus c0 c1 .. ce`
//! genus 2
//! equation y^2 + y + x^3*(x+1)^2
//! infinity 1 -2 -5             # degree, then optional valuations of x and y
//! ```

mod local;
pub mod poly;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ffield::{FieldCtx, FieldError, Fq, MAX_FIELD_ORDER};

pub use crate::series::Laurent as LocalSeries;
pub use local::{PlaceKind, PlaceSpec, EXPANSION_CAP, VALUATION_CAP};
pub use poly::{BiPoly, UPoly};

/// Extension fields up to this size are also counted to confirm a zeta numerator.
const CHECK_COUNT_LIMIT: u64 = 1 << 16;

/// Largest extension degree accepted by [`PlaneCurve::count_points`].
pub const MAX_EXTENSION_DEGREE: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("the equation must involve y")]
    NoY,
    #[error("counting over F_{{q^{d}}} with q = {q} exceeds the supported size")]
    CapExceeded { q: u32, d: u32 },
    #[error("the model is singular above x = {x0} over F_{{q^{d}}}; point counts would be wrong")]
    SingularModel { x0: u32, d: u32 },
    #[error("the model contains the vertical line x = {0}")]
    ReducibleModel(u32),
    #[error("point counts admit no zeta numerator of genus {genus}: {detail}")]
    InconsistentCounts { genus: u32, detail: String },
    #[error("the point is not on the curve")]
    NotOnCurve,
    #[error("singular point; no uniformizer available")]
    SingularPoint,
    #[error("x - a is not a uniformizer at this point (vertical tangent)")]
    VerticalTangent,
    #[error("the denominator vanishes on the curve")]
    ZeroDenominator,
    #[error("no nonzero coefficient found up to precision {0}; the function is probably zero")]
    ValuationCapExceeded(usize),
    #[error("expansions at infinity need an equation of degree 1 in y")]
    NoExpansionAtInfinity,
    #[error("valuation at infinity needs one declared rational place with weights and an equation monic in y")]
    NoInfinityWeights,
    #[error("the weights do not single out a leading term of {0}")]
    AmbiguousWeights(String),
    #[error("the proposed uniformizer has valuation {0}, not 1")]
    BadUniformizer(i64),
}

/// A place above `x = infinity`, declared by the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfinityPlace {
    pub degree: u32,
    /// Valuations of `x` and `y` at the place, if it is rational and they are known.
    pub weights: Option<(i64, i64)>,
}

#[derive(Debug, Clone)]
pub struct PlaneCurve {
    ctx: FieldCtx,
    equation: BiPoly,
    genus: u32,
    infinity: Vec<InfinityPlace>,
}

impl PlaneCurve {
    pub fn new(
        ctx: FieldCtx,
        equation: BiPoly,
        genus: u32,
        infinity: Vec<InfinityPlace>,
    ) -> Result<Self, CurveError> {
        if equation.deg_y() == 0 {
            return Err(CurveError::NoY);
        }
        Ok(PlaneCurve { ctx, equation, genus, infinity })
    }

    /// `F_q(x)` presented as the curve `y = 0`, with the pole of `x` at infinity.
    pub fn rational(ctx: FieldCtx) -> Self {
        PlaneCurve {
            ctx,
            equation: BiPoly::y(),
            genus: 0,
            infinity: vec![InfinityPlace { degree: 1, weights: Some((-1, 0)) }],
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn equation(&self) -> &BiPoly {
        &self.equation
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn infinity(&self) -> &[InfinityPlace] {
        &self.infinity
    }

    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let mut ctx: Option<FieldCtx> = None;
        let mut genus = None;
        let mut equation: Option<String> = None;
        let mut infinity = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| CurveError::Parse(format!("line {}: {what}", lineno + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let words: Vec<&str> = rest.split_whitespace().collect();
            match key {
                "field" => {
                    let nums: Vec<u32> = words
                        .iter()
                        .filter(|w| **w != "modulus")
                        .map(|w| w.parse().map_err(|_| bad("expected integers")))
                        .collect::<Result<_, _>>()?;
                    if nums.len() < 2 {
                        return Err(bad("field needs p and e"));
                    }
                    let modulus = (nums.len() > 2).then(|| nums[2..].to_vec());
                    ctx = Some(FieldCtx::new(nums[0], nums[1], modulus.as_deref())?);
                }
                "genus" => {
                    genus = Some(
                        words.first().and_then(|w| w.parse().ok()).ok_or_else(|| bad("genus"))?,
                    );
                }
                "equation" => equation = Some(rest.to_string()),
                "infinity" => {
                    let nums: Vec<i64> = words
                        .iter()
                        .map(|w| w.parse().map_err(|_| bad("expected integers")))
                        .collect::<Result<_, _>>()?;
                    let place = match nums.as_slice() {
                        [d] if *d > 0 => InfinityPlace { degree: *d as u32, weights: None },
                        [1, vx, vy] => InfinityPlace { degree: 1, weights: Some((*vx, *vy)) },
                        _ => return Err(bad("infinity takes a degree and optional weights")),
                    };
                    infinity.push(place);
                }
                _ => return Err(bad(&format!("unknown keyword {key:?}"))),
            }
        }
        let ctx = ctx.ok_or_else(|| CurveError::Parse("missing field line".into()))?;
        let equation = equation.ok_or_else(|| CurveError::Parse("missing equation".into()))?;
        let genus = genus.ok_or_else(|| CurveError::Parse("missing genus".into()))?;
        let equation = BiPoly::parse(&ctx, &equation)?;
        PlaneCurve::new(ctx, equation, genus, infinity)
    }

    pub fn to_file_string(&self) -> String {
        let f = &self.ctx;
        let mut out = format!("field {} {}", f.p(), f.e());
        if f.e() > 1 {
            out.push_str(" modulus");
            for c in f.modulus() {
                out.push_str(&format!(" {c}"));
            }
        }
        out.push_str(&format!("\ngenus {}\nequation {}\n", self.genus, self.equation.display(f)));
        for place in &self.infinity {
            match place.weights {
                Some((vx, vy)) => out.push_str(&format!("infinity {} {vx} {vy}\n", place.degree)),
                None => out.push_str(&format!("infinity {}\n", place.degree)),
            }
        }
        out
    }

    /// Number of places of degree one over `F_{q^d}`: smooth affine points plus the
    /// declared places at infinity whose degree divides `d`.
    pub fn count_points(&self, d: u32) -> Result<u64, CurveError> {
        let f = &self.ctx;
        let big_order = (f.q() as u64).checked_pow(d);
        if d == 0
            || d > MAX_EXTENSION_DEGREE
            || big_order.is_none_or(|n| n > MAX_FIELD_ORDER)
        {
            return Err(CurveError::CapExceeded { q: f.q(), d });
        }
        let big = FieldCtx::new(f.p(), f.e() * d, None)?;
        let embed_table = embedding(f, &big);
        let embed = |c: Fq| embed_table[c.index() as usize];
        let fx = self.equation.partial_x(f);
        let fy = self.equation.partial_y(f);
        let order = big.q() as u64;
        let mut affine = 0u64;
        for x0 in big.elements() {
            let g = self.equation.specialize_x(&big, &embed, x0);
            let Some(deg) = poly::upoly::degree(&g) else {
                return Err(CurveError::ReducibleModel(x0.index()));
            };
            if deg == 0 {
                continue;
            }
            let mut frob = poly::upoly::pow_y_mod(&big, order, &g);
            // Y^Q - Y
            if frob.len() < 2 {
                frob.resize(2, Fq::ZERO);
            }
            frob[1] = big.sub(frob[1], Fq::ONE);
            poly::upoly::trim(&mut frob);
            let roots = poly::upoly::gcd(&big, &g, &frob);
            let count = poly::upoly::degree(&roots).unwrap_or(0);
            if count == 0 {
                continue;
            }
            let sing = poly::upoly::gcd(&big, &roots, &fy.specialize_x(&big, &embed, x0));
            let sing = poly::upoly::gcd(&big, &sing, &fx.specialize_x(&big, &embed, x0));
            if poly::upoly::degree(&sing).unwrap_or(0) > 0 {
                return Err(CurveError::SingularModel { x0: x0.index(), d });
            }
            affine += count as u64;
        }
        let at_infinity: u64 = self
            .infinity
            .iter()
            .filter(|pl| d.is_multiple_of(pl.degree))
            .map(|pl| pl.degree as u64)
            .sum();
        Ok(affine + at_infinity)
    }

    /// Numerator `L(t) = a_0 + ... + a_{2g} t^{2g}` of the zeta function.
    pub fn zeta_numerator(&self) -> Result<Vec<BigInt>, CurveError> {
        let g = self.genus;
        let counts: Vec<u64> = (1..=g).map(|d| self.count_points(d)).collect::<Result<_, _>>()?;
        let l = zeta_from_counts(self.ctx.q() as u64, g, &counts)?;
        // further counts, when affordable, must agree with the prediction
        for d in g + 1..=g + 2 {
            if (self.ctx.q() as u64).checked_pow(d).is_none_or(|n| n > CHECK_COUNT_LIMIT) {
                break;
            }
            let actual = self.count_points(d)?;
            let predicted = predicted_count(self.ctx.q() as u64, &l, d);
            if predicted != BigInt::from(actual) {
                return Err(CurveError::InconsistentCounts {
                    genus: g,
                    detail: format!("N_{d} = {actual} but the numerator predicts {predicted}"),
                });
            }
        }
        Ok(l)
    }

    /// Divisor class number `h = L(1)`.
    pub fn class_number(&self) -> Result<u64, CurveError> {
        let l = self.zeta_numerator()?;
        let h: BigInt = l.iter().sum();
        h.to_u64().filter(|&h| h >= 1).ok_or_else(|| CurveError::InconsistentCounts {
            genus: self.genus,
            detail: format!("L(1) = {h} is not a positive class number"),
        })
    }
}

/// Image of each element of `small` (by index) under a fixed embedding into `big`.
fn embedding(small: &FieldCtx, big: &FieldCtx) -> Vec<Fq> {
    let modulus: Vec<Fq> = small.modulus().iter().map(|&c| big.from_int(c as i64)).collect();
    let root = big
        .elements()
        .find(|&z| poly::upoly::eval(big, &modulus, z).is_zero())
        .expect("the modulus splits in an extension of degree divisible by e");
    small
        .elements()
        .map(|a| {
            small
                .coords(a)
                .iter()
                .enumerate()
                .fold(Fq::ZERO, |acc, (i, &c)| {
                    big.add(acc, big.mul(big.from_int(c as i64), big.pow(root, i as i64)))
                })
        })
        .collect()
}

/// Solves Newton's identities for `L(t)` given `N_1, ..., N_g`.
pub fn zeta_from_counts(q: u64, genus: u32, counts: &[u64]) -> Result<Vec<BigInt>, CurveError> {
    let g = genus as usize;
    assert!(counts.len() >= g);
    let qb = BigInt::from(q);
    // c_k = N_k - q^k - 1
    let c: Vec<BigInt> = (1..=g)
        .map(|k| BigInt::from(counts[k - 1]) - qb.pow(k as u32) - 1)
        .collect();
    let mut a = vec![BigInt::one()];
    for k in 1..=g {
        let s: BigInt = (1..=k).map(|i| &c[i - 1] * &a[k - i]).sum();
        let kb = BigInt::from(k);
        if !(&s % &kb).is_zero() {
            return Err(CurveError::InconsistentCounts {
                genus,
                detail: format!("coefficient a_{k} = {s}/{k} is not integral"),
            });
        }
        a.push(s / kb);
    }
    for i in (0..g).rev() {
        a.push(&a[i] * qb.pow((g - i) as u32));
    }
    Ok(a)
}

/// `N_d` predicted by a zeta numerator.
pub fn predicted_count(q: u64, l: &[BigInt], d: u32) -> BigInt {
    // power sums of the reciprocal roots from log L
    let d = d as usize;
    let mut s = vec![BigInt::zero(); d + 1];
    for k in 1..=d {
        // k a_k = sum_{i=1}^{k} c_i a_{k-i}
        let ak = l.get(k).cloned().unwrap_or_default();
        let mut rhs = BigInt::from(k) * ak;
        for (i, si) in s.iter().enumerate().take(k).skip(1) {
            rhs -= si * l.get(k - i).cloned().unwrap_or_default();
        }
        s[k] = rhs;
    }
    &s[d] + BigInt::from(q).pow(d as u32) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> PlaneCurve {
        PlaneCurve::parse(
            "field 2 1\ngenus 2\nequation y^2 + y + x^3*(x+1)^2\ninfinity 1 -2 -5\n",
        )
        .unwrap()
    }

    /// Affine points by exhaustive search over F_{q^d}, used as an oracle.
    fn brute_affine(c: &PlaneCurve, d: u32) -> u64 {
        let f = c.field();
        let big = FieldCtx::new(f.p(), f.e() * d, None).unwrap();
        let table = embedding(f, &big);
        let lifted = BiPoly::from_terms(
            &big,
            c.equation().terms().map(|(k, a)| (k, table[a.index() as usize])),
        );
        let mut n = 0;
        for x in big.elements() {
            for y in big.elements() {
                if lifted.eval(&big, x, y).is_zero() {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn example_counts() {
        let c = example();
        assert_eq!(c.count_points(1).unwrap(), 5);
        assert_eq!(c.count_points(2).unwrap(), 5);
        for d in 1..=4 {
            assert_eq!(c.count_points(d).unwrap(), brute_affine(&c, d) + 1, "d={d}");
        }
    }

    #[test]
    fn example_zeta_and_class_number() {
        let c = example();
        let l = c.zeta_numerator().unwrap();
        let expect: Vec<BigInt> = [1, 2, 2, 4, 4].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(l, expect);
        assert_eq!(c.class_number().unwrap(), 13);
        assert_eq!(c.count_points(3).unwrap(), 17);
    }

    #[test]
    fn elliptic_curve_class_number() {
        let c = PlaneCurve::parse("field 2 1\ngenus 1\nequation y^2+y+x^3\ninfinity 1 -2 -3").unwrap();
        assert_eq!(c.count_points(1).unwrap(), 3);
        let l = c.zeta_numerator().unwrap();
        assert_eq!(l, vec![BigInt::from(1), BigInt::from(0), BigInt::from(2)]);
        assert_eq!(c.class_number().unwrap(), 3);
    }

    #[test]
    fn rational_function_field() {
        for q in [2u64, 3, 4, 5, 9] {
            let c = PlaneCurve::rational(FieldCtx::with_order(q).unwrap());
            assert_eq!(c.count_points(1).unwrap(), q + 1);
            assert_eq!(c.zeta_numerator().unwrap(), vec![BigInt::from(1)]);
            assert_eq!(c.class_number().unwrap(), 1);
        }
    }

    #[test]
    fn wrong_genus_is_detected() {
        let text = "field 2 1\ngenus 1\nequation y^2 + y + x^3*(x+1)^2\ninfinity 1 -2 -5\n";
        let c = PlaneCurve::parse(text).unwrap();
        assert!(matches!(c.zeta_numerator(), Err(CurveError::InconsistentCounts { .. })));
    }

    #[test]
    fn singular_and_degenerate_models() {
        let f = FieldCtx::new(3, 1, None).unwrap();
        // node at the origin
        let eq = BiPoly::parse(&f, "y^2 - x^2 - x^3").unwrap();
        let c = PlaneCurve::new(f.clone(), eq, 0, vec![]).unwrap();
        assert!(matches!(c.count_points(1), Err(CurveError::SingularModel { .. })));
        let eq = BiPoly::parse(&f, "x*y - x").unwrap();
        let c = PlaneCurve::new(f.clone(), eq, 0, vec![]).unwrap();
        assert!(matches!(c.count_points(1), Err(CurveError::ReducibleModel(0))));
        assert!(matches!(PlaneCurve::new(f, BiPoly::x(), 0, vec![]), Err(CurveError::NoY)));
    }

    #[test]
    fn caps_are_enforced() {
        let c = example();
        assert!(matches!(c.count_points(13), Err(CurveError::CapExceeded { .. })));
        assert!(matches!(c.count_points(0), Err(CurveError::CapExceeded { .. })));
    }

    #[test]
    fn file_round_trip() {
        let c = example();
        let again = PlaneCurve::parse(&c.to_file_string()).unwrap();
        assert_eq!(again.equation(), c.equation());
        assert_eq!(again.infinity(), c.infinity());
        let f = FieldCtx::new(2, 3, Some(&[1, 0, 1, 1])).unwrap();
        let c = PlaneCurve::new(f, BiPoly::y(), 0, vec![InfinityPlace { degree: 1, weights: None }])
            .unwrap();
        let again = PlaneCurve::parse(&c.to_file_string()).unwrap();
        assert_eq!(again.field().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn functional_equation_symmetry_over_larger_fields() {
        // y^2 = x^3 + x + 1 over F_5 and F_7 (genus 1, one point at infinity)
        for p in [5u32, 7] {
            let f = FieldCtx::new(p, 1, None).unwrap();
            let eq = BiPoly::parse(&f, "y^2 - x^3 - x - 1").unwrap();
            let c = PlaneCurve::new(f, eq, 1, vec![InfinityPlace { degree: 1, weights: None }])
                .unwrap();
            let l = c.zeta_numerator().unwrap();
            assert_eq!(l[2], BigInt::from(p));
            assert_eq!(l[1], BigInt::from(c.count_points(1).unwrap()) - (p as i64 + 1));
        }
    }
}
