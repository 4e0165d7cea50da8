//! Exact fields and the multiplicative/additive residue groups used by the
//! isomorphism conditions of the catalog.
//!
//! Supported fields are GF(p) for primes p <= 97, GF(4) = GF(2)[t]/(t^2+t+1),
//! GF(8) = GF(2)[t]/(t^3+t+1) and the rationals. Finite field elements are
//! encoded as integers `0..q`; for GF(4) and GF(8) bit i of the integer is the
//! coefficient of t^i, so the encoding is canonical and equality is bitwise.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Prime(u64),
    Extension { p: u64, k: u32 },
    Rationals,
}

/// File representation `{"p": 3, "k": 1}`; the rationals are `{"p": 0, "k": 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub p: u64,
    #[serde(default = "one_u32")]
    pub k: u32,
}

fn one_u32() -> u32 {
    1
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldSpec {
    /// Checks the construction preconditions.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Prime(p) => {
                if p > 97 || !is_prime(p) {
                    return Err(Error::NonPrimeModulus(p));
                }
                Ok(())
            }
            FieldSpec::Extension { p, k } => {
                if !is_prime(p) {
                    return Err(Error::NonPrimeModulus(p));
                }
                if p != 2 || !(k == 2 || k == 3) {
                    return Err(Error::UnsupportedExtension { p, k });
                }
                Ok(())
            }
            FieldSpec::Rationals => Ok(()),
        }
    }

    pub fn from_pk(p: u64, k: u32) -> Result<FieldSpec> {
        let spec = match (p, k) {
            (0, _) => FieldSpec::Rationals,
            (_, 0) => return Err(Error::UnsupportedExtension { p, k }),
            (_, 1) => FieldSpec::Prime(p),
            _ => FieldSpec::Extension { p, k },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> FieldSpecJson {
        match *self {
            FieldSpec::Prime(p) => FieldSpecJson { p, k: 1 },
            FieldSpec::Extension { p, k } => FieldSpecJson { p, k },
            FieldSpec::Rationals => FieldSpecJson { p: 0, k: 1 },
        }
    }

    /// Parses command-line names: `gf3`, `gf4`, `gf8`, `q`.
    pub fn parse_flag(s: &str) -> Result<FieldSpec> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "qq" || t == "rationals" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("gf")
            .ok_or_else(|| Error::Parse(format!("unknown field {s}")))?;
        let q: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field {s}")))?;
        if is_prime(q) {
            return FieldSpec::from_pk(q, 1);
        }
        for p in 2..=q {
            if is_prime(p) && q.is_multiple_of(p) {
                let mut k = 0;
                let mut r = q;
                while r.is_multiple_of(p) {
                    r /= p;
                    k += 1;
                }
                if r != 1 {
                    return Err(Error::NonPrimeModulus(q));
                }
                return FieldSpec::from_pk(p, k);
            }
        }
        Err(Error::NonPrimeModulus(q))
    }

    /// Display name, e.g. `GF(3)` or `Q`.
    pub fn name(&self) -> String {
        match *self {
            FieldSpec::Prime(p) => format!("GF({p})"),
            FieldSpec::Extension { p, k } => format!("GF({})", p.pow(k)),
            FieldSpec::Rationals => "Q".to_string(),
        }
    }

    /// Short identifier, e.g. `gf3`.
    pub fn flag(&self) -> String {
        match *self {
            FieldSpec::Prime(p) => format!("gf{p}"),
            FieldSpec::Extension { p, k } => format!("gf{}", p.pow(k)),
            FieldSpec::Rationals => "q".to_string(),
        }
    }

    /// Inverse of [`FieldSpec::name`].
    pub fn parse_name(s: &str) -> Result<FieldSpec> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field name {s}")))?;
        FieldSpec::parse_flag(&format!("gf{inner}"))
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rationals)
    }
}

/// Exact field arithmetic. All operations are total except `inv` of zero.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` for infinite fields.
    fn order(&self) -> Option<u64>;
    /// All elements in canonical enumeration order (finite fields only).
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn is_square(&self, a: &Self::Elem) -> bool;
    /// Whether t^2 + a t + b has a root in the field.
    fn quadratic_has_root(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn nonzero_elements(&self) -> Option<Vec<Self::Elem>> {
        self.elements()
            .map(|v| v.into_iter().filter(|e| !self.is_zero(e)).collect())
    }
}

struct GfTables {
    p: u64,
    k: u32,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    square: Vec<bool>,
}

/// A finite field with table-driven arithmetic on `u8` codes.
#[derive(Clone)]
pub struct Gf {
    t: Arc<GfTables>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.k == other.t.k
    }
}
impl Eq for Gf {}

fn poly_mul_mod2(a: usize, b: usize, k: u32, modulus: usize) -> usize {
    let mut acc = 0usize;
    for i in 0..k {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    for i in (k..2 * k).rev() {
        if acc >> i & 1 == 1 {
            acc ^= modulus << (i - k);
        }
    }
    acc
}

impl Gf {
    pub fn new(spec: FieldSpec) -> Result<Gf> {
        spec.validate()?;
        let (p, k) = match spec {
            FieldSpec::Prime(p) => (p, 1),
            FieldSpec::Extension { p, k } => (p, k),
            FieldSpec::Rationals => return Err(Error::InvalidParameter("Gf needs a finite field".into())),
        };
        let q = p.pow(k) as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        // t^2+t+1 and t^3+t+1
        let modulus = if k == 2 { 0b111 } else { 0b1011 };
        for a in 0..q {
            for b in 0..q {
                let (s, m) = if k == 1 {
                    ((a + b) % q, (a * b) % q)
                } else {
                    (a ^ b, poly_mul_mod2(a, b, k, modulus))
                };
                add[a * q + b] = s as u8;
                mul[a * q + b] = m as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        let mut square = vec![false; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
            square[mul[a * q + a] as usize] = true;
        }
        Ok(Gf {
            t: Arc::new(GfTables { p, k, q, add, mul, neg, inv, square }),
        })
    }

    pub fn prime(p: u64) -> Result<Gf> {
        Gf::new(FieldSpec::Prime(p))
    }

    /// Number of elements.
    pub fn q(&self) -> usize {
        self.t.q
    }
}

impl Field for Gf {
    type Elem = u8;

    fn spec(&self) -> FieldSpec {
        if self.t.k == 1 {
            FieldSpec::Prime(self.t.p)
        } else {
            FieldSpec::Extension { p: self.t.p, k: self.t.k }
        }
    }
    #[inline]
    fn zero(&self) -> u8 {
        0
    }
    #[inline]
    fn one(&self) -> u8 {
        1
    }
    #[inline]
    fn add(&self, a: &u8, b: &u8) -> u8 {
        self.t.add[*a as usize * self.t.q + *b as usize]
    }
    #[inline]
    fn neg(&self, a: &u8) -> u8 {
        self.t.neg[*a as usize]
    }
    #[inline]
    fn mul(&self, a: &u8, b: &u8) -> u8 {
        self.t.mul[*a as usize * self.t.q + *b as usize]
    }
    #[inline]
    fn inv(&self, a: &u8) -> Option<u8> {
        if *a == 0 {
            None
        } else {
            Some(self.t.inv[*a as usize])
        }
    }
    #[inline]
    fn sub(&self, a: &u8, b: &u8) -> u8 {
        self.add(a, &self.neg(b))
    }
    #[inline]
    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u8 {
        // Integers map through the prime subfield.
        let p = self.t.p as i64;
        let r = v.rem_euclid(p) as u8;
        if self.t.k == 1 {
            r
        } else {
            // prime subfield of GF(2^k) is {0, 1}
            r & 1
        }
    }
    fn parse_elem(&self, s: &str) -> Result<u8> {
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let a = self.parse_elem(num)?;
            let b = self.parse_elem(den)?;
            return self
                .div(&a, &b)
                .ok_or_else(|| Error::Parse(format!("division by zero in {s}")));
        }
        let v: i64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        if self.t.k == 1 {
            Ok(self.from_i64(v))
        } else if (0..self.t.q as i64).contains(&v) {
            Ok(v as u8)
        } else {
            Err(Error::Parse(format!(
                "element {s} out of range for {:?} (codes are 0..{})",
                self,
                self.t.q - 1
            )))
        }
    }
    fn format_elem(&self, a: &u8) -> String {
        a.to_string()
    }
    fn characteristic(&self) -> u64 {
        self.t.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.t.q as u64)
    }
    fn elements(&self) -> Option<Vec<u8>> {
        Some((0..self.t.q as u8).collect())
    }
    fn is_square(&self, a: &u8) -> bool {
        self.t.square[*a as usize]
    }
    fn quadratic_has_root(&self, a: &u8, b: &u8) -> bool {
        (0..self.t.q as u8).any(|t| {
            let v = self.add(&self.add(&self.mul(&t, &t), &self.mul(a, &t)), b);
            v == 0
        })
    }
}

/// The field of rational numbers with exact big-integer fractions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

fn bigint_is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let t = s.trim();
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(n))
            }
        }
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn is_square(&self, a: &BigRational) -> bool {
        bigint_is_square(a.numer()) && bigint_is_square(a.denom())
    }
    fn quadratic_has_root(&self, a: &BigRational, b: &BigRational) -> bool {
        let disc = a * a - BigRational::from_integer(BigInt::from(4)) * b;
        self.is_square(&disc)
    }
}

/// Whether t^2 + a t + b is irreducible.
pub fn quadratic_irreducible<F: Field>(f: &F, a: &F::Elem, b: &F::Elem) -> bool {
    !f.quadratic_has_root(a, b)
}

/// The kinds of residue group appearing in the isomorphism conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueKind<E> {
    /// (F*)^k
    KthPowers(u64),
    /// G(s) = {(x^2 - y^2 s)^2 : (x,y) != (0,0)}, for s not a square.
    Gs(E),
    /// H(r) = {x^2 + r x : x in F}, characteristic 2.
    Hr(E),
    /// G(r,s) = {x^2 + r x y + s y^2 : (x,y) != (0,0)}, for t^2 + r t + s irreducible.
    Grs(E, E),
}

/// A materialised residue group over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGroup<E: Ord> {
    pub kind: ResidueKind<E>,
    pub members: BTreeSet<E>,
    /// Set for H(0), which degenerates to the subgroup of squares.
    pub degenerate: bool,
}

impl<E: Ord> ResidueGroup<E> {
    pub fn contains(&self, e: &E) -> bool {
        self.members.contains(e)
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Materialises a residue group of a finite field.
pub fn residue_group<F: Field>(f: &F, kind: ResidueKind<F::Elem>) -> Result<ResidueGroup<F::Elem>> {
    let elems = f.elements().ok_or(Error::UnsupportedField)?;
    let nonzero: Vec<F::Elem> = elems.iter().filter(|e| !f.is_zero(e)).cloned().collect();
    let mut members = BTreeSet::new();
    let mut degenerate = false;
    match &kind {
        ResidueKind::KthPowers(k) => {
            for x in &nonzero {
                members.insert(f.pow(x, *k));
            }
        }
        ResidueKind::Gs(s) => {
            if f.is_square(s) {
                return Err(Error::InvalidParameter(format!(
                    "G(s) needs s outside F^2, got s = {}",
                    f.format_elem(s)
                )));
            }
            for x in &elems {
                for y in &elems {
                    if f.is_zero(x) && f.is_zero(y) {
                        continue;
                    }
                    let v = f.sub(&f.mul(x, x), &f.mul(&f.mul(y, y), s));
                    members.insert(f.mul(&v, &v));
                }
            }
        }
        ResidueKind::Hr(r) => {
            if f.characteristic() != 2 {
                return Err(Error::InvalidParameter(
                    "H(r) is an additive subgroup only in characteristic 2".into(),
                ));
            }
            degenerate = f.is_zero(r);
            for x in &elems {
                members.insert(f.add(&f.mul(x, x), &f.mul(r, x)));
            }
        }
        ResidueKind::Grs(r, s) => {
            if f.quadratic_has_root(r, s) {
                return Err(Error::InvalidParameter(format!(
                    "G(r,s) needs t^2 + {} t + {} irreducible",
                    f.format_elem(r),
                    f.format_elem(s)
                )));
            }
            for x in &elems {
                for y in &elems {
                    if f.is_zero(x) && f.is_zero(y) {
                        continue;
                    }
                    let v = f.add(
                        &f.add(&f.mul(x, x), &f.mul(&f.mul(r, x), y)),
                        &f.mul(&f.mul(s, y), y),
                    );
                    members.insert(v);
                }
            }
        }
    }
    Ok(ResidueGroup { kind, members, degenerate })
}

/// A runtime-selected field, used at the file and command-line boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Finite(Gf),
    Rational(Rationals),
}

impl AnyField {
    pub fn new(spec: FieldSpec) -> Result<AnyField> {
        spec.validate()?;
        Ok(match spec {
            FieldSpec::Rationals => AnyField::Rational(Rationals),
            s => AnyField::Finite(Gf::new(s)?),
        })
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyField::Finite(g) => g.spec(),
            AnyField::Rational(q) => q.spec(),
        }
    }

    /// Parses and re-formats an element into canonical form.
    pub fn canonical(&self, s: &str) -> Result<String> {
        match self {
            AnyField::Finite(g) => Ok(g.format_elem(&g.parse_elem(s)?)),
            AnyField::Rational(q) => Ok(q.format_elem(&q.parse_elem(s)?)),
        }
    }

    pub fn is_zero_str(&self, s: &str) -> Result<bool> {
        match self {
            AnyField::Finite(g) => Ok(g.is_zero(&g.parse_elem(s)?)),
            AnyField::Rational(q) => Ok(q.is_zero(&q.parse_elem(s)?)),
        }
    }

    pub fn neg_str(&self, s: &str) -> Result<String> {
        match self {
            AnyField::Finite(g) => Ok(g.format_elem(&g.neg(&g.parse_elem(s)?))),
            AnyField::Rational(q) => Ok(q.format_elem(&q.neg(&q.parse_elem(s)?))),
        }
    }
}
