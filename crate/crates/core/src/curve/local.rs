//! Local expansions and valuations at rational places.

use std::fmt;

use crate::ffield::Fq;
use crate::series::{Laurent, Series};

use super::poly::{upoly, BiPoly};
use super::{CurveError, PlaneCurve};

/// Largest relative precision tried by [`PlaneCurve::local_expand`].
pub const EXPANSION_CAP: usize = 4096;
/// Largest precision tried by [`PlaneCurve::valuation`].
pub const VALUATION_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceKind {
    /// The affine point `(a, b)`; the default uniformizer is `x - a`.
    Affine(Fq, Fq),
    /// The pole of `x`; the default uniformizer is `1/x`.
    PoleOfX,
}

/// A rational place together with the local parameter used for expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceSpec {
    pub kind: PlaceKind,
    /// Alternative uniformizer `num/den`; must have valuation exactly one.
    pub uniformizer: Option<(BiPoly, BiPoly)>,
}

impl PlaceSpec {
    pub fn affine(a: Fq, b: Fq) -> Self {
        PlaceSpec { kind: PlaceKind::Affine(a, b), uniformizer: None }
    }

    pub fn pole() -> Self {
        PlaceSpec { kind: PlaceKind::PoleOfX, uniformizer: None }
    }

    pub fn with_uniformizer(mut self, num: BiPoly, den: BiPoly) -> Self {
        self.uniformizer = Some((num, den));
        self
    }

    /// Parses `pole` or `affine:a,b` with field elements in [`crate::ffield::FieldCtx::parse_elem`]
    /// syntax.
    pub fn parse(curve: &PlaneCurve, text: &str) -> Result<Self, CurveError> {
        let t = text.trim();
        if t == "pole" || t == "infinity" {
            return Ok(Self::pole());
        }
        let body = t
            .strip_prefix("affine:")
            .ok_or_else(|| CurveError::Parse(format!("place {t:?}: expected `pole` or `affine:a,b`")))?;
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| CurveError::Parse(format!("place {t:?}: expected two coordinates")))?;
        let f = curve.field();
        let a = f.parse_elem(a).map_err(|e| CurveError::Parse(e.to_string()))?;
        let b = f.parse_elem(b).map_err(|e| CurveError::Parse(e.to_string()))?;
        Ok(Self::affine(a, b))
    }
}

impl fmt::Display for PlaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceKind::Affine(a, b) => write!(f, "affine:{},{}", a.index(), b.index()),
            PlaceKind::PoleOfX => write!(f, "pole"),
        }
    }
}

impl PlaneCurve {
    /// Expansions of `x` and `y` in the default parameter, each known to relative
    /// precision at least `prec`.
    fn coordinate_expansions(
        &self,
        kind: PlaceKind,
        prec: usize,
    ) -> Result<(Laurent, Laurent), CurveError> {
        let f = &self.ctx;
        match kind {
            PlaceKind::Affine(a, b) => {
                if !self.equation.eval(f, a, b).is_zero() {
                    return Err(CurveError::NotOnCurve);
                }
                let fy = self.equation.partial_y(f);
                if fy.eval(f, a, b).is_zero() {
                    return Err(if self.equation.partial_x(f).eval(f, a, b).is_zero() {
                        CurveError::SingularPoint
                    } else {
                        CurveError::VerticalTangent
                    });
                }
                let x = Series::from_coeffs(vec![a, Fq::ONE], prec);
                let y = self.lift_y(&fy, &x, b, prec);
                Ok((Laurent::new(0, x), Laurent::new(0, y)))
            }
            PlaceKind::PoleOfX => {
                if self.equation.deg_y() != 1 {
                    return Err(CurveError::NoExpansionAtInfinity);
                }
                let x = Laurent::from_poly(&[Fq::ONE], -1, prec);
                let at_pole = |c: &[Fq]| -> Laurent {
                    match upoly::degree(c) {
                        None => Laurent::zero_to(prec as i64),
                        Some(d) => {
                            let rev: Vec<Fq> = c[..=d].iter().rev().copied().collect();
                            Laurent::from_poly(&rev, -(d as i64), prec + d)
                        }
                    }
                };
                let f0 = at_pole(&self.equation.y_coeff(0));
                let f1 = at_pole(&self.equation.y_coeff(1));
                let y = f0.neg(f).div(f, &f1).expect("leading y-coefficient is nonzero");
                Ok((x, y))
            }
        }
    }

    /// Newton–Hensel lift of the branch `y(0) = b` to precision `prec`.
    fn lift_y(&self, fy: &BiPoly, x: &Series, b: Fq, prec: usize) -> Series {
        let f = &self.ctx;
        let mut y = Series::from_coeffs(vec![b], prec);
        let mut have = 1usize;
        while have < prec {
            have = (2 * have).min(prec);
            let xt = x.truncate(have);
            let yt = y.truncate(have);
            let val = eval_series(self, &self.equation, &xt, &yt);
            let slope = eval_series(self, fy, &xt, &yt);
            let step = val.div(f, &slope).expect("F_y is a unit at a smooth point");
            y = Series::from_coeffs(yt.sub(f, &step).coeffs().to_vec(), prec);
        }
        y
    }

    /// Evaluates `g(x, y)` on Laurent expansions.
    pub fn eval_laurent(&self, g: &BiPoly, x: &Laurent, y: &Laurent) -> Laurent {
        let f = &self.ctx;
        // constants are exact; give them more precision than any other term
        let exact = x.unit().prec().max(y.unit().prec()) + 1;
        let powers = |v: &Laurent, k: u32| -> Vec<Laurent> {
            (0..=k as i64).map(|i| v.pow(f, i).expect("nonnegative power")).collect()
        };
        let xp = powers(x, g.deg_x());
        let yp = powers(y, g.deg_y());
        let mut acc: Option<Laurent> = None;
        for ((i, j), c) in g.terms() {
            let monomial = match (i, j) {
                (0, 0) => Laurent::from_poly(&[Fq::ONE], 0, exact),
                (_, 0) => xp[i as usize].clone(),
                (0, _) => yp[j as usize].clone(),
                _ => xp[i as usize].mul(f, &yp[j as usize]),
            };
            let term = monomial.scale(f, c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(f, &term),
            });
        }
        // the zero polynomial is known to vanish to every order
        acc.unwrap_or_else(|| Laurent::zero_to(i64::MAX / 4))
    }

    /// Laurent expansion of `num/den` at `place`, exact modulo `pi^n`.
    pub fn local_expand(
        &self,
        place: &PlaceSpec,
        num: &BiPoly,
        den: &BiPoly,
        n: i64,
    ) -> Result<Laurent, CurveError> {
        let mut prec = (n.max(0) as usize).max(4) + 8;
        loop {
            if let Some(value) = self.try_expand(place, num, den, prec)? {
                if value.abs_prec() >= n {
                    return Ok(value.truncate_abs(n));
                }
            }
            if prec >= EXPANSION_CAP {
                return Err(CurveError::ZeroDenominator);
            }
            prec = (2 * prec).min(EXPANSION_CAP);
        }
    }

    fn try_expand(
        &self,
        place: &PlaceSpec,
        num: &BiPoly,
        den: &BiPoly,
        prec: usize,
    ) -> Result<Option<Laurent>, CurveError> {
        let f = &self.ctx;
        let (x, y) = self.coordinate_expansions(place.kind, prec)?;
        let d = self.eval_laurent(den, &x, &y);
        let Some(q) = self.eval_laurent(num, &x, &y).div(f, &d) else {
            return Ok(None);
        };
        let Some((unum, uden)) = &place.uniformizer else {
            return Ok(Some(q));
        };
        let Some(u) = self.eval_laurent(unum, &x, &y).div(f, &self.eval_laurent(uden, &x, &y))
        else {
            return Ok(None);
        };
        match u.valuation() {
            None => return Ok(None),
            Some(1) => {}
            Some(v) => return Err(CurveError::BadUniformizer(v)),
        }
        let mut coeffs = vec![Fq::ZERO];
        coeffs.extend_from_slice(u.unit().coeffs());
        let forward = Series::from_coeffs(coeffs, u.unit().prec() + 1);
        let back = forward.reverse(f).expect("linear term is nonzero");
        Ok(q.substitute(f, &back))
    }

    /// `v(num) - v(den)` at `place`.
    pub fn valuation(
        &self,
        place: &PlaceSpec,
        num: &BiPoly,
        den: &BiPoly,
    ) -> Result<i64, CurveError> {
        if place.kind == PlaceKind::PoleOfX && self.equation.deg_y() != 1 {
            return Ok(self.weighted_valuation(num)? - self.weighted_valuation(den)?);
        }
        let mut prec = 8usize;
        loop {
            let (x, y) = self.coordinate_expansions(place.kind, prec)?;
            let vn = self.eval_laurent(num, &x, &y).valuation();
            let vd = self.eval_laurent(den, &x, &y).valuation();
            if let (Some(a), Some(b)) = (vn, vd) {
                return Ok(a - b);
            }
            if prec >= VALUATION_CAP {
                return Err(CurveError::ValuationCapExceeded(prec));
            }
            prec = (2 * prec).min(VALUATION_CAP);
        }
    }

    /// Valuation at the declared rational place at infinity from the weights of `x`, `y`.
    fn weighted_valuation(&self, g: &BiPoly) -> Result<i64, CurveError> {
        let f = &self.ctx;
        let weights = match self.infinity.as_slice() {
            [pl] if pl.degree == 1 => pl.weights,
            _ => None,
        };
        let (vx, vy) = weights.ok_or(CurveError::NoInfinityWeights)?;
        let m = self.equation.deg_y();
        let lead = self.equation.y_coeff(m);
        if lead.len() != 1 {
            return Err(CurveError::NoInfinityWeights);
        }
        let reduced = self.reduce_in_y(g, m, lead[0]);
        if reduced.is_zero() {
            return Err(CurveError::ValuationCapExceeded(0));
        }
        let vals: Vec<i64> = reduced.terms().map(|((i, j), _)| i as i64 * vx + j as i64 * vy).collect();
        let min = *vals.iter().min().expect("nonzero polynomial");
        if vals.iter().filter(|&&v| v == min).count() > 1 {
            return Err(CurveError::AmbiguousWeights(reduced.display(f)));
        }
        Ok(min)
    }

    /// Remainder of `g` on division by the equation, viewed as monic in `y`.
    fn reduce_in_y(&self, g: &BiPoly, m: u32, lead: Fq) -> BiPoly {
        let f = &self.ctx;
        let inv = f.inv(lead);
        // y^m = -(F - lead y^m)/lead
        let tail = self
            .equation
            .sub(f, &BiPoly::monomial(0, m).scale(f, lead))
            .scale(f, f.neg(inv));
        let mut g = g.clone();
        while g.deg_y() >= m && !g.is_zero() {
            let top = g.deg_y();
            let mut high = BiPoly::zero();
            let mut low = BiPoly::zero();
            for ((i, j), c) in g.terms() {
                let t = BiPoly::monomial(i, j).scale(f, c);
                if j == top {
                    high = high.add(f, &BiPoly::monomial(i, j - m).scale(f, c));
                } else {
                    low = low.add(f, &t);
                }
            }
            g = low.add(f, &high.mul(f, &tail));
        }
        g
    }
}

fn eval_series(curve: &PlaneCurve, g: &BiPoly, x: &Series, y: &Series) -> Series {
    let f = &curve.ctx;
    let n = x.prec().min(y.prec());
    let mut acc = Series::zero(n);
    // Horner in y with coefficients polynomial in x
    for j in (0..=g.deg_y()).rev() {
        acc = acc.mul(f, y);
        let cx = g.y_coeff(j);
        let mut cxs = Series::zero(n);
        for &c in cx.iter().rev() {
            cxs = cxs.mul(f, x);
            cxs.set_coeff(0, f.add(cxs.coeff(0), c));
        }
        acc = acc.add(f, &cxs);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::InfinityPlace;
    use crate::ffield::FieldCtx;

    fn example() -> PlaneCurve {
        PlaneCurve::parse("field 2 1\ngenus 2\nequation y^2 + y + x^3*(x+1)^2\ninfinity 1 -2 -5")
            .unwrap()
    }

    fn p(c: &PlaneCurve, s: &str) -> BiPoly {
        BiPoly::parse(c.field(), s).unwrap()
    }

    fn support(l: &Laurent) -> Vec<i64> {
        (l.offset()..l.abs_prec()).filter(|&k| !l.coeff(k).is_zero()).collect()
    }

    #[test]
    fn worked_expansion_of_y() {
        let c = example();
        let origin = PlaceSpec::affine(Fq::ZERO, Fq::ZERO);
        let y = c.local_expand(&origin, &p(&c, "y"), &p(&c, "1"), 11).unwrap();
        assert_eq!(support(&y), vec![3, 5, 6, 10]);
        assert_eq!(y.abs_prec(), 11);
        let x = c.local_expand(&origin, &p(&c, "x"), &p(&c, "1"), 6).unwrap();
        assert_eq!(support(&x), vec![1]);
        let z = c.local_expand(&origin, &p(&c, "y+x^2"), &p(&c, "1"), 8).unwrap();
        assert_eq!(z.valuation(), Some(2));
    }

    #[test]
    fn hensel_residual_vanishes() {
        let c = example();
        let (x, y) = c.coordinate_expansions(PlaceKind::Affine(Fq::ONE, Fq::ONE), 40).unwrap();
        let r = c.eval_laurent(c.equation(), &x, &y);
        assert_eq!(r.valuation(), None);
        assert!(r.abs_prec() >= 40);
    }

    #[test]
    fn valuation_matrix_rows() {
        let c = example();
        let places = [
            PlaceSpec::pole(),
            PlaceSpec::affine(Fq::ZERO, Fq::ONE),
            PlaceSpec::affine(Fq::ONE, Fq::ZERO),
            PlaceSpec::affine(Fq::ONE, Fq::ONE),
            PlaceSpec::affine(Fq::ZERO, Fq::ZERO),
        ];
        let rows = [
            ("x", [-2, 1, 0, 0, 1]),
            ("x+1", [-2, 0, 1, 1, 0]),
            ("y", [-5, 0, 2, 0, 3]),
            ("y+x^2", [-5, 0, 0, 3, 2]),
        ];
        let one = p(&c, "1");
        for (func, expect) in rows {
            let got: Vec<i64> =
                places.iter().map(|pl| c.valuation(pl, &p(&c, func), &one).unwrap()).collect();
            assert_eq!(got, expect, "{func}");
            assert_eq!(got.iter().sum::<i64>(), 0);
        }
        assert_eq!(c.valuation(&places[2], &one, &one).unwrap(), 0);
        assert_eq!(c.valuation(&places[4], &p(&c, "y"), &p(&c, "x")).unwrap(), 2);
    }

    #[test]
    fn zero_function_hits_the_cap() {
        let c = example();
        let zero = p(&c, "y^2 + y + x^5 + x^3");
        let r = c.valuation(&PlaceSpec::affine(Fq::ZERO, Fq::ZERO), &zero, &p(&c, "1"));
        assert!(matches!(r, Err(CurveError::ValuationCapExceeded(_))));
        let r = c.local_expand(&PlaceSpec::affine(Fq::ZERO, Fq::ZERO), &p(&c, "1"), &zero, 4);
        assert!(matches!(r, Err(CurveError::ZeroDenominator)));
    }

    #[test]
    fn bad_places() {
        let c = example();
        let r = c.local_expand(&PlaceSpec::affine(Fq::ZERO, Fq::ZERO), &p(&c, "y"), &p(&c, "1"), 3);
        assert!(r.is_ok());
        let off = PlaceSpec { kind: PlaceKind::Affine(Fq::ZERO, Fq::ZERO), uniformizer: None };
        let c3 = PlaneCurve::new(
            FieldCtx::new(3, 1, None).unwrap(),
            BiPoly::parse(&FieldCtx::new(3, 1, None).unwrap(), "y^2 - x").unwrap(),
            0,
            vec![InfinityPlace { degree: 1, weights: None }],
        )
        .unwrap();
        let one = p(&c3, "1");
        assert!(matches!(
            c3.local_expand(&off, &one, &one, 2),
            Err(CurveError::VerticalTangent)
        ));
        let not_on = PlaceSpec::affine(Fq::ONE, Fq::ZERO);
        assert!(matches!(c3.local_expand(&not_on, &one, &one, 2), Err(CurveError::NotOnCurve)));
    }

    #[test]
    fn pole_of_x_on_the_rational_field() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        let c = PlaneCurve::rational(f.clone());
        let pole = PlaceSpec::pole();
        // (x - 2)/x = 1 - 2/x
        let u = c.local_expand(&pole, &BiPoly::parse(&f, "x - 2").unwrap(), &BiPoly::x(), 6).unwrap();
        assert_eq!(u.valuation(), Some(0));
        assert_eq!(u.coeff(1), f.from_int(-2));
        assert!(u.coeff(2).is_zero());
        assert_eq!(c.valuation(&pole, &BiPoly::parse(&f, "x^3+1").unwrap(), &BiPoly::x()).unwrap(), -2);
    }

    #[test]
    fn other_uniformizer_reexpands() {
        let c = example();
        let origin = PlaceSpec::affine(Fq::ZERO, Fq::ZERO);
        let alt = origin.clone().with_uniformizer(p(&c, "x+y"), p(&c, "1"));
        // x in terms of t = x + y = pi + pi^3 + ...
        let x_alt = c.local_expand(&alt, &p(&c, "x"), &p(&c, "1"), 12).unwrap();
        let t_alt = c.local_expand(&alt, &p(&c, "x+y"), &p(&c, "1"), 12).unwrap();
        assert_eq!(support(&t_alt), vec![1]);
        assert_eq!(x_alt.valuation(), Some(1));
        // consistency: y(t) + x(t) = t
        let y_alt = c.local_expand(&alt, &p(&c, "y"), &p(&c, "1"), 12).unwrap();
        assert_eq!(x_alt.add(c.field(), &y_alt).truncate_abs(12), t_alt);
        let bad = origin.with_uniformizer(p(&c, "y"), p(&c, "1"));
        assert!(matches!(
            c.local_expand(&bad, &p(&c, "x"), &p(&c, "1"), 4),
            Err(CurveError::BadUniformizer(3))
        ));
    }
}
