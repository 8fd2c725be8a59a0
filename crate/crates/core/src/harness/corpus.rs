//! The golden corpus: published rows of genera and place counts, stored in
//! `data/golden.csv` and compiled into the library.

use serde::Serialize;

use super::HarnessError;

const GOLDEN: &str = include_str!("../../data/golden.csv");

/// Block of the corpus a row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowGroup {
    /// Fields over `F_p(x)` for `p = 2, 3, 5, 7`, indexed by `(l, |S|)`.
    RationalPrime,
    /// The same for `F_4(x)`.
    RationalQ4,
    /// The nine fields over the genus-2 curve `y^2 + y = x^3 (x+1)^2`.
    Example,
    /// Record tables of `N_q(g)` with ranges.
    Record,
}

impl RowGroup {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "rational-prime" => RowGroup::RationalPrime,
            "rational-q4" => RowGroup::RationalQ4,
            "example" => RowGroup::Example,
            "big" | "slim" | "record" => RowGroup::Record,
            _ => return None,
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            RowGroup::RationalPrime => "rational-prime",
            RowGroup::RationalQ4 => "rational-q4",
            RowGroup::Example => "example",
            RowGroup::Record => "record",
        }
    }
}

/// Whether a row's ground field is available to this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowClass {
    /// Ground field `F_q(x)`.
    Rational,
    /// Ground field is the bundled genus-2 curve with `S` one of its unit prefixes.
    ExampleCurve,
    /// Ground field taken from outside literature; listed, never asserted.
    External,
}

/// One published row. `n_lower == n_upper` when the value is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub line: usize,
    pub group: RowGroup,
    pub q: u32,
    pub g: u64,
    pub n_lower: u64,
    pub n_upper: u64,
    /// Conductor exponent, when printed.
    pub n: Option<usize>,
    pub l: u32,
    pub s: u32,
    pub h_s: u64,
    pub g_k: u64,
}

/// Genera of the fields over the example curve with `|S| = 3`.
const EXAMPLE_GENERA: [u64; 9] = [4, 10, 28, 68, 164, 388, 868, 1892, 4068];

impl GoldenRow {
    pub fn class(&self) -> RowClass {
        if self.g_k == 0 {
            RowClass::Rational
        } else if self.q == 2 && self.g_k == 2 && self.h_s == 1 && self.s == 3 && EXAMPLE_GENERA.contains(&self.g) {
            RowClass::ExampleCurve
        } else {
            RowClass::External
        }
    }

    pub fn is_range(&self) -> bool {
        self.n_lower != self.n_upper
    }

    /// `"25-26"` or `"33"`.
    pub fn n_text(&self) -> String {
        if self.is_range() {
            format!("{}-{}", self.n_lower, self.n_upper)
        } else {
            self.n_lower.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenCorpus {
    pub rows: Vec<GoldenRow>,
}

impl GoldenCorpus {
    /// The bundled corpus.
    pub fn bundled() -> Self {
        Self::parse(GOLDEN).expect("bundled corpus parses")
    }

    /// Parses `group,q,g,n_lower,n_upper,n,l,s,h_s,g_k` lines; `#` starts a comment and
    /// `n` may be empty.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut rows = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| HarnessError::Corpus { line: k + 1, msg };
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != 10 {
                return Err(bad(format!("expected 10 fields, found {}", cells.len())));
            }
            let group = RowGroup::parse(cells[0]).ok_or_else(|| bad(format!("unknown group {:?}", cells[0])))?;
            let num = |i: usize| -> Result<u64, HarnessError> {
                cells[i].parse().map_err(|_| bad(format!("field {} is not an integer: {:?}", i + 1, cells[i])))
            };
            let n = if cells[5].is_empty() { None } else { Some(num(5)? as usize) };
            let row = GoldenRow {
                line: k + 1,
                group,
                q: num(1)? as u32,
                g: num(2)?,
                n_lower: num(3)?,
                n_upper: num(4)?,
                n,
                l: num(6)? as u32,
                s: num(7)? as u32,
                h_s: num(8)?,
                g_k: num(9)?,
            };
            if row.n_lower > row.n_upper {
                return Err(bad("lower bound exceeds upper bound".into()));
            }
            rows.push(row);
        }
        Ok(GoldenCorpus { rows })
    }

    pub fn of_group(&self, group: RowGroup) -> impl Iterator<Item = &GoldenRow> {
        self.rows.iter().filter(move |r| r.group == group)
    }

    pub fn count(&self, class: RowClass) -> usize {
        self.rows.iter().filter(|r| r.class() == class).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_shape() {
        let c = GoldenCorpus::bundled();
        assert_eq!(c.of_group(RowGroup::RationalPrime).count(), 44);
        assert_eq!(c.of_group(RowGroup::RationalQ4).count(), 21);
        assert_eq!(c.of_group(RowGroup::Example).count(), 9);
        assert_eq!(c.rows.len(), 311);
        assert!(c.count(RowClass::External) > 0);
        let ex: Vec<_> = c.rows.iter().filter(|r| r.class() == RowClass::ExampleCurve).map(|r| r.g).collect();
        assert_eq!(ex.len(), 12);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = GoldenCorpus::parse("# header\nrecord,2,10,13\n").unwrap_err();
        assert!(matches!(err, HarnessError::Corpus { line: 2, .. }));
        assert!(GoldenCorpus::parse("nope,2,1,1,1,,1,1,1,0").is_err());
        assert!(GoldenCorpus::parse("record,2,1,5,4,,1,1,1,0").is_err());
    }

    #[test]
    fn classification() {
        let c = GoldenCorpus::parse("big,2,6,10,10,2,1,1,5,1\nbig,2,28,25,26,7,3,3,1,2\nslim,16,1,25,25,4,1,12,1,0\n").unwrap();
        let classes: Vec<RowClass> = c.rows.iter().map(GoldenRow::class).collect();
        assert_eq!(classes, [RowClass::External, RowClass::ExampleCurve, RowClass::Rational]);
        assert_eq!(c.rows[1].n_text(), "25-26");
    }
}
