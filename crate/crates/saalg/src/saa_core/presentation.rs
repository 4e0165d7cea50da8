//! Sparse triple presentations and their JSON / text file formats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AnyField, Field, FieldSpec, FieldSpecJson};
use crate::linalg::{basis_name, parse_basis_name};

/// One structure constant (e_a e_b, e_c) = val with a < b < c.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Canonical field element string.
    pub val: String,
}

/// A field, a half-dimension n and the nonzero structure constants on
/// sorted basis triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub field: FieldSpec,
    pub n: usize,
    pub triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    a: String,
    b: String,
    c: String,
    val: String,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    field: FieldSpecJson,
    n: usize,
    triples: Vec<TripleJson>,
}

/// Sorts three distinct indices, returning them with the permutation sign.
pub fn sort_triple(a: usize, b: usize, c: usize) -> ([usize; 3], bool) {
    let mut t = [a, b, c];
    let mut odd = false;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    (t, odd)
}

impl Presentation {
    /// Validates and normalises raw triples given by basis index.
    pub fn new(field: FieldSpec, n: usize, raw: Vec<(usize, usize, usize, String)>) -> Result<Self> {
        let f = AnyField::new(field)?;
        let d = 2 * n;
        let mut triples: Vec<Triple> = Vec::with_capacity(raw.len());
        for (a, b, c, v) in raw {
            let label = format!("({} {}, {})", basis_name(a), basis_name(b), basis_name(c));
            if a >= d || b >= d || c >= d {
                return Err(Error::BadIndex(format!("{label} out of range for n = {n}")));
            }
            if a == b || b == c || a == c {
                return Err(Error::BadIndex(format!("{label} repeats a basis vector")));
            }
            if f.is_zero_str(&v)? {
                return Err(Error::ZeroValue(label));
            }
            let ([a, b, c], odd) = sort_triple(a, b, c);
            let val = if odd { f.neg_str(&v)? } else { f.canonical(&v)? };
            if triples.iter().any(|t| (t.a, t.b, t.c) == (a, b, c)) {
                return Err(Error::DuplicateTriple(format!(
                    "({} {}, {})",
                    basis_name(a),
                    basis_name(b),
                    basis_name(c)
                )));
            }
            triples.push(Triple { a, b, c, val });
        }
        triples.sort();
        Ok(Presentation { field, n, triples })
    }

    /// Parses basis names such as `("x2", "y3", "y4", "1")`.
    pub fn from_named(field: FieldSpec, n: usize, raw: &[(&str, &str, &str, &str)]) -> Result<Self> {
        let mut out = Vec::with_capacity(raw.len());
        for (a, b, c, v) in raw {
            out.push((
                parse_basis_name(a, n)?,
                parse_basis_name(b, n)?,
                parse_basis_name(c, n)?,
                v.to_string(),
            ));
        }
        Presentation::new(field, n, out)
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Typed triple values over `f`, whose spec must match.
    pub fn typed<F: Field>(&self, f: &F) -> Result<Vec<(usize, usize, usize, F::Elem)>> {
        if f.spec() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.triples
            .iter()
            .map(|t| Ok((t.a, t.b, t.c, f.parse_elem(&t.val)?)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let j = PresentationJson {
            field: self.field.to_json(),
            n: self.n,
            triples: self
                .triples
                .iter()
                .map(|t| TripleJson {
                    a: basis_name(t.a),
                    b: basis_name(t.b),
                    c: basis_name(t.c),
                    val: t.val.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("presentation serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PresentationJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("presentation JSON: {e}")))?;
        let field = FieldSpec::from_pk(j.field.p, j.field.k)?;
        let raw: Vec<(&str, &str, &str, &str)> = j
            .triples
            .iter()
            .map(|t| (t.a.as_str(), t.b.as_str(), t.c.as_str(), t.val.as_str()))
            .collect();
        Presentation::from_named(field, j.n, &raw)
    }

    /// Text form: a `dim 8 over GF(3)` header and one `(x2 y3, y4) = 1` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {} over {}\n", self.dim(), self.field.name());
        for t in &self.triples {
            s.push_str(&format!(
                "({} {}, {}) = {}\n",
                basis_name(t.a),
                basis_name(t.b),
                basis_name(t.c),
                t.val
            ));
        }
        s
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty presentation".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        if words.len() != 4 || words[0] != "dim" || words[2] != "over" {
            return Err(Error::Parse(format!("bad header {header:?}, expected `dim D over GF(q)`")));
        }
        let dim: usize = words[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in {header:?}")))?;
        if !dim.is_multiple_of(2) {
            return Err(Error::Parse(format!("dimension {dim} is odd")));
        }
        let field = FieldSpec::parse_name(words[3])?;
        let n = dim / 2;
        let mut raw = Vec::new();
        for line in lines {
            raw.push(parse_text_triple(line, n)?);
        }
        Presentation::new(field, n, raw)
    }

    /// Accepts either format.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Presentation::from_json(s)
        } else {
            Presentation::from_text(s)
        }
    }
}

fn parse_text_triple(line: &str, n: usize) -> Result<(usize, usize, usize, String)> {
    let bad = || Error::Parse(format!("bad triple line {line:?}, expected `(x2 y3, y4) = v`"));
    let (lhs, val) = line.split_once('=').ok_or_else(bad)?;
    let inner = lhs
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (ab, c) = inner.split_once(',').ok_or_else(bad)?;
    let ab: Vec<&str> = ab.split_whitespace().collect();
    if ab.len() != 2 {
        return Err(bad());
    }
    Ok((
        parse_basis_name(ab[0], n)?,
        parse_basis_name(ab[1], n)?,
        parse_basis_name(c, n)?,
        val.trim().to_string(),
    ))
}
