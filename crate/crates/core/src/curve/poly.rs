//! Univariate and bivariate polynomials over `F_q`, with a small text syntax.
//!
//! Syntax: sums and differences of products of `x`, `y`, field constants
//! (`3`, `w`, `w^5`, `[1,0,1]`) and parenthesised subexpressions, each optionally raised
//! to a nonnegative integer power, e.g. `y^2 + y + x^3*(x+1)^2`.

use std::collections::BTreeMap;
use std::fmt;

use crate::ffield::{FieldCtx, Fq};

use super::CurveError;

/// Dense univariate polynomial, lowest degree first, without trailing zeros.
pub type UPoly = Vec<Fq>;

pub mod upoly {
    use super::*;

    pub fn trim(a: &mut UPoly) {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }

    pub fn degree(a: &[Fq]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(f: &FieldCtx, a: &[Fq], b: &[Fq]) -> UPoly {
        let n = a.len().max(b.len());
        let mut out: UPoly = (0..n)
            .map(|i| {
                f.add(a.get(i).copied().unwrap_or(Fq::ZERO), b.get(i).copied().unwrap_or(Fq::ZERO))
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(f: &FieldCtx, a: &[Fq], b: &[Fq]) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(f: &FieldCtx, a: &[Fq], b: &[Fq]) -> UPoly {
        let db = degree(b).expect("division by the zero polynomial");
        let lead_inv = f.inv(b[db]);
        let mut r: UPoly = a.to_vec();
        trim(&mut r);
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = f.mul(r[dr], lead_inv);
            for k in 0..=db {
                r[dr - db + k] = f.sub(r[dr - db + k], f.mul(c, b[k]));
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(f: &FieldCtx, a: &[Fq], b: &[Fq]) -> UPoly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if let Some(d) = degree(&a) {
            let inv = f.inv(a[d]);
            for c in a.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
        a
    }

    /// `Y^exp mod m` for a nonconstant `m`.
    pub fn pow_y_mod(f: &FieldCtx, exp: u64, m: &[Fq]) -> UPoly {
        let mut acc: UPoly = rem(f, &[Fq::ONE], m);
        let mut base: UPoly = rem(f, &[Fq::ZERO, Fq::ONE], m);
        let mut k = exp;
        while k > 0 {
            if k & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &base), m);
            }
            k >>= 1;
            if k > 0 {
                base = rem(f, &mul(f, &base, &base), m);
            }
        }
        acc
    }

    pub fn eval(f: &FieldCtx, a: &[Fq], x: Fq) -> Fq {
        a.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

/// Sparse polynomial `sum c_{ij} x^i y^j`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Fq>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Fq) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c, None);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((i, j), Fq::ONE);
        BiPoly { terms }
    }

    pub fn from_terms(f: &FieldCtx, terms: impl IntoIterator<Item = ((u32, u32), Fq)>) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c, Some(f));
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Fq, f: Option<&FieldCtx>) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(Fq::ZERO);
        *entry = match f {
            Some(f) => f.add(*entry, c),
            None => c,
        };
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Fq)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fq {
        self.terms.get(&(i, j)).copied().unwrap_or(Fq::ZERO)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn add(&self, f: &FieldCtx, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.terms {
            out.add_term(i, j, c, Some(f));
        }
        out
    }

    pub fn neg(&self, f: &FieldCtx) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&k, &c)| (k, f.neg(c))).collect() }
    }

    pub fn sub(&self, f: &FieldCtx, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn mul(&self, f: &FieldCtx, other: &Self) -> Self {
        let mut out = BiPoly::zero();
        for (&(i1, j1), &a) in &self.terms {
            for (&(i2, j2), &b) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, f.mul(a, b), Some(f));
            }
        }
        out
    }

    pub fn scale(&self, f: &FieldCtx, c: Fq) -> Self {
        BiPoly::from_terms(f, self.terms.iter().map(|(&k, &a)| (k, f.mul(a, c))))
    }

    pub fn pow(&self, f: &FieldCtx, k: u32) -> Self {
        let mut acc = BiPoly::constant(Fq::ONE);
        for _ in 0..k {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn eval(&self, f: &FieldCtx, x: Fq, y: Fq) -> Fq {
        self.terms.iter().fold(Fq::ZERO, |acc, (&(i, j), &c)| {
            f.add(acc, f.mul(c, f.mul(f.pow(x, i as i64), f.pow(y, j as i64))))
        })
    }

    pub fn partial_x(&self, f: &FieldCtx) -> Self {
        BiPoly::from_terms(
            f,
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), &c)| ((i - 1, j), f.mul(c, f.from_int(i as i64)))),
        )
    }

    pub fn partial_y(&self, f: &FieldCtx) -> Self {
        BiPoly::from_terms(
            f,
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), &c)| ((i, j - 1), f.mul(c, f.from_int(j as i64)))),
        )
    }

    /// Coefficient of `y^j` as a polynomial in `x`.
    pub fn y_coeff(&self, j: u32) -> UPoly {
        let mut out = vec![Fq::ZERO; self.deg_x() as usize + 1];
        for (&(i, jj), &c) in &self.terms {
            if jj == j {
                out[i as usize] = c;
            }
        }
        upoly::trim(&mut out);
        out
    }

    /// `F(x0, Y)` in a field `big` into which the coefficients are mapped by `embed`.
    pub fn specialize_x(&self, big: &FieldCtx, embed: &dyn Fn(Fq) -> Fq, x0: Fq) -> UPoly {
        let mut out = vec![Fq::ZERO; self.deg_y() as usize + 1];
        for (&(i, j), &c) in &self.terms {
            let t = big.mul(embed(c), big.pow(x0, i as i64));
            out[j as usize] = big.add(out[j as usize], t);
        }
        upoly::trim(&mut out);
        out
    }

    pub fn parse(f: &FieldCtx, text: &str) -> Result<Self, CurveError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { f, tokens, pos: 0, text };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }

    pub fn display(&self, f: &FieldCtx) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&(i, j), &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if c != Fq::ONE || (i == 0 && j == 0) {
                factors.push(f.format_elem(c));
            }
            for (var, k) in [("x", i), ("y", j)] {
                match k {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{k}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|(&(i, j), c)| format!("{}*x^{i}*y^{j}", c.index())).collect();
        write!(fm, "BiPoly[{}]", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    X,
    Y,
    Elem(String),
    Num(u32),
    Caret,
    Star,
    Plus,
    Minus,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, CurveError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            'x' => out.push(Token::X),
            'y' => out.push(Token::Y),
            'w' => out.push(Token::Elem("w".into())),
            '^' => out.push(Token::Caret),
            '*' => out.push(Token::Star),
            '+' => out.push(Token::Plus),
            '-' => out.push(Token::Minus),
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            '[' => {
                let end = chars[i..]
                    .iter()
                    .position(|&d| d == ']')
                    .ok_or_else(|| CurveError::Parse(format!("unclosed bracket in {text:?}")))?;
                out.push(Token::Elem(chars[i..=i + end].iter().collect()));
                i += end;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                out.push(Token::Num(
                    s.parse().map_err(|_| CurveError::Parse(format!("bad number {s}")))?,
                ));
            }
            other => return Err(CurveError::Parse(format!("unexpected {other:?} in {text:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    f: &'a FieldCtx,
    tokens: Vec<Token>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> CurveError {
        CurveError::Parse(format!("{what} at token {} of {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<BiPoly, CurveError> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg(self.f);
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(self.f, &t);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(self.f, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, CurveError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let t = self.power()?;
                    acc = acc.mul(self.f, &t);
                }
                // juxtaposition such as `x(x+1)` or `2x`
                Some(Token::X | Token::Y | Token::Open | Token::Elem(_)) => {
                    let t = self.power()?;
                    acc = acc.mul(self.f, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BiPoly, CurveError> {
        let tok = self.peek().cloned().ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        match tok {
            Token::X | Token::Y | Token::Open => {
                let base = match tok {
                    Token::X => BiPoly::x(),
                    Token::Y => BiPoly::y(),
                    _ => {
                        let inner = self.expr()?;
                        if self.peek() != Some(&Token::Close) {
                            return Err(self.error("expected ')'"));
                        }
                        self.pos += 1;
                        inner
                    }
                };
                let k = self.exponent()?;
                Ok(base.pow(self.f, k))
            }
            Token::Elem(s) => {
                let mut s = s;
                if s == "w" && self.peek() == Some(&Token::Caret) {
                    let k = self.exponent()?;
                    s = format!("w^{k}");
                }
                let c = self.f.parse_elem(&s).map_err(|e| CurveError::Parse(e.to_string()))?;
                Ok(BiPoly::constant(c))
            }
            Token::Num(n) => {
                let c = self.f.from_int(n as i64);
                let k = self.exponent()?;
                Ok(BiPoly::constant(self.f.pow(c, k as i64)))
            }
            _ => Err(self.error("expected a factor")),
        }
    }

    fn exponent(&mut self) -> Result<u32, CurveError> {
        if self.peek() != Some(&Token::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Token::Num(k)) => {
                self.pos += 1;
                Ok(k)
            }
            _ => Err(self.error("expected exponent")),
        }
    }
}
