//! The classification of nilpotent algebras of dimension at most 10 as data:
//! presentation templates, parameter constraints and the equivalence
//! relations on parameters.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{residue_group, Field, ResidueKind};
use crate::linalg::parse_basis_name;
use crate::saa_core::{Presentation, SAAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Abelian,
    /// Negative or edge-case examples outside the census.
    Fixture,
    Census,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Nonzero { params: Vec<String> },
    /// The parameter is not a square.
    Nonsquare { params: Vec<String> },
    /// t^2 + a t + b is irreducible for params [a, b].
    Irreducible { params: Vec<String> },
    CharNot { p: u64 },
    CharIs { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Equivalence {
    Identity,
    /// r ~ s iff s/r is a k-th power.
    Powers { k: u64 },
    /// (alpha, beta) ~ (alpha', beta') under the SL2 action on (x1, y1).
    Sl2,
    /// (r, s) ~ (r', s') iff r'/r is a cube and s/s' lies in G(s).
    TypeCOdd,
    /// (g, r, s) ~ (g', r', s') iff g'/g is a cube, r'/r lies in G(r, s)
    /// and s' - (r'/r)^2 s lies in H(r').
    TypeCChar2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: String,
    pub n: usize,
    pub kind: EntryKind,
    pub branch: String,
    pub params: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub equivalence: Equivalence,
    /// [a, b, c, value]; the value is a literal or a parameter name.
    pub triples: Vec<[String; 4]>,
    pub source: String,
}

#[derive(Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();

/// All entries, in file order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG.get_or_init(|| {
        let file: CatalogFile =
            serde_json::from_str(include_str!("../catalog.json")).expect("catalog.json is valid");
        file.entries
    })
}

pub fn entry(label: &str) -> Result<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// `P8(2,3)[1]`-style key of a family member.
pub fn member_key(label: &str, params: &[String]) -> String {
    if params.is_empty() {
        label.to_string()
    } else {
        format!("{label}[{}]", params.join(","))
    }
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    fn param_index(&self, name: &str) -> usize {
        self.params
            .iter()
            .position(|p| p == name)
            .unwrap_or_else(|| panic!("unknown parameter {name} in {}", self.label))
    }

    /// Whether the characteristic constraints allow this field.
    pub fn char_allows<F: Field>(&self, f: &F) -> bool {
        let ch = f.characteristic();
        self.constraints.iter().all(|c| match c {
            Constraint::CharNot { p } => ch != *p,
            Constraint::CharIs { p } => ch == *p,
            _ => true,
        })
    }

    pub fn check_params<F: Field>(&self, f: &F, params: &[F::Elem]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} parameter(s) ({}), got {}",
                self.label,
                self.params.len(),
                self.params.join(", "),
                params.len()
            )));
        }
        let get = |name: &str| &params[self.param_index(name)];
        // characteristic conditions first
        let mut ordered: Vec<&Constraint> = self.constraints.iter().collect();
        ordered.sort_by_key(|c| !matches!(c, Constraint::CharNot { .. } | Constraint::CharIs { .. }));
        for c in ordered {
            match c {
                Constraint::CharNot { p } if f.characteristic() == *p => {
                    return Err(Error::CharMismatch(format!(
                        "{} is not defined in characteristic {p}",
                        self.label
                    )))
                }
                Constraint::CharIs { p } if f.characteristic() != *p => {
                    return Err(Error::CharMismatch(format!(
                        "{} needs characteristic {p}",
                        self.label
                    )))
                }
                Constraint::Nonzero { params: ps } => {
                    for p in ps {
                        if f.is_zero(get(p)) {
                            return Err(Error::ConstraintViolated(format!("{p} must be nonzero")));
                        }
                    }
                }
                Constraint::Nonsquare { params: ps } => {
                    for p in ps {
                        if f.is_square(get(p)) {
                            return Err(Error::ConstraintViolated(format!(
                                "{p} = {} must not be a square",
                                f.format_elem(get(p))
                            )));
                        }
                    }
                }
                Constraint::Irreducible { params: ps } => {
                    let (a, b) = (get(&ps[0]), get(&ps[1]));
                    if f.quadratic_has_root(a, b) {
                        return Err(Error::ConstraintViolated(format!(
                            "t^2 + {} t + {} must be irreducible",
                            f.format_elem(a),
                            f.format_elem(b)
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Typed triples with parameters substituted; triples whose parameter
    /// is zero are dropped.
    pub fn triples_with<F: Field>(&self, f: &F, params: &[F::Elem]) -> Result<Vec<(usize, usize, usize, F::Elem)>> {
        let mut out = Vec::with_capacity(self.triples.len());
        for [a, b, c, v] in &self.triples {
            let val = match self.params.iter().position(|p| p == v) {
                Some(i) => params[i].clone(),
                None => f.parse_elem(v)?,
            };
            if !f.is_zero(&val) {
                out.push((parse_basis_name(a, self.n)?, parse_basis_name(b, self.n)?, parse_basis_name(c, self.n)?, val));
            }
        }
        Ok(out)
    }

    pub fn instantiate<F: Field>(&self, f: &F, params: &[F::Elem]) -> Result<SAAlgebra<F>> {
        self.check_params(f, params)?;
        SAAlgebra::from_triples(f, self.n, &self.triples_with(f, params)?)
    }

    /// Instantiates with parameters given as strings.
    pub fn instantiate_str<F: Field>(&self, f: &F, params: &[String]) -> Result<SAAlgebra<F>> {
        let ps = params.iter().map(|p| f.parse_elem(p)).collect::<Result<Vec<_>>>()?;
        self.instantiate(f, &ps)
    }

    pub fn presentation<F: Field>(&self, f: &F, params: &[F::Elem]) -> Result<Presentation> {
        Ok(self.instantiate(f, params)?.to_presentation())
    }

    /// All constraint-satisfying parameter tuples in lexicographic element
    /// order.
    pub fn valid_params<F: Field>(&self, f: &F) -> Result<Vec<Vec<F::Elem>>> {
        let elems = f.elements().ok_or(Error::UnsupportedField)?;
        if !self.char_allows(f) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let k = self.params.len();
        let mut idx = vec![0usize; k];
        loop {
            let tuple: Vec<F::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
            if self.check_params(f, &tuple).is_ok() {
                out.push(tuple);
            }
            // odometer, last index fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < elems.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    pub fn equivalent<F: Field>(&self, f: &F, p1: &[F::Elem], p2: &[F::Elem]) -> Result<bool> {
        if f.order().is_none() {
            return Err(Error::UnsupportedField);
        }
        self.check_params(f, p1)?;
        self.check_params(f, p2)?;
        let ratio = |a: &F::Elem, b: &F::Elem| f.div(b, a).expect("nonzero parameter");
        Ok(match &self.equivalence {
            Equivalence::Identity => p1 == p2,
            Equivalence::Powers { k } => is_kth_power(f, &ratio(&p1[0], &p2[0]), *k),
            Equivalence::Sl2 => sl2_equivalent(f, (&p1[0], &p1[1]), (&p2[0], &p2[1])),
            Equivalence::TypeCOdd => {
                let (r, s) = (&p1[0], &p1[1]);
                let (r2, s2) = (&p2[0], &p2[1]);
                let g = residue_group(f, ResidueKind::Gs(s.clone()))?;
                is_kth_power(f, &ratio(r, r2), 3) && g.contains(&f.div(s, s2).unwrap())
            }
            Equivalence::TypeCChar2 => {
                let (g1, r, s) = (&p1[0], &p1[1], &p1[2]);
                let (g2, r2, s2) = (&p2[0], &p2[1], &p2[2]);
                let grs = residue_group(f, ResidueKind::Grs(r.clone(), s.clone()))?;
                let h = residue_group(f, ResidueKind::Hr(r2.clone()))?;
                let q = ratio(r, r2);
                let shift = f.sub(s2, &f.mul(&f.mul(&q, &q), s));
                is_kth_power(f, &ratio(g1, g2), 3) && grs.contains(&q) && h.contains(&shift)
            }
        })
    }

    /// One representative per equivalence class, each the least member of
    /// its class in lexicographic element order.
    pub fn family_members<F: Field>(&self, f: &F) -> Result<Vec<Vec<F::Elem>>> {
        let all = self.valid_params(f)?;
        let mut reps: Vec<Vec<F::Elem>> = Vec::new();
        for p in all {
            let mut new = true;
            for r in &reps {
                if self.equivalent(f, r, &p)? {
                    new = false;
                    break;
                }
            }
            if new {
                reps.push(p);
            }
        }
        Ok(reps)
    }
}

/// Whether x is in (F*)^k, for a finite field.
pub fn is_kth_power<F: Field>(f: &F, x: &F::Elem, k: u64) -> bool {
    let q1 = f.order().expect("finite field") - 1;
    let g = num_integer::gcd(k, q1);
    !f.is_zero(x) && f.pow(x, q1 / g) == f.one()
}

fn sl2_equivalent<F: Field>(f: &F, (al, be): (&F::Elem, &F::Elem), (al2, be2): (&F::Elem, &F::Elem)) -> bool {
    let elems = f.elements().expect("finite field");
    let two = f.from_i64(2);
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    if f.sub(&f.mul(a, d), &f.mul(b, c)) != f.one() {
                        continue;
                    }
                    let den = f.add(&f.add(&f.mul(d, d), &f.mul(&f.mul(c, d), al)), &f.mul(&f.mul(c, c), be));
                    let Some(inv) = f.inv(&den) else { continue };
                    let num_a = f.add(
                        &f.add(
                            &f.mul(&f.add(&f.mul(a, d), &f.mul(b, c)), al),
                            &f.mul(&f.mul(&two, &f.mul(a, c)), be),
                        ),
                        &f.mul(&two, &f.mul(b, d)),
                    );
                    let num_b = f.add(&f.add(&f.mul(b, b), &f.mul(&f.mul(a, b), al)), &f.mul(&f.mul(a, a), be));
                    if f.mul(&num_a, &inv) == *al2 && f.mul(&num_b, &inv) == *be2 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

pub fn instantiate<F: Field>(label: &str, f: &F, params: &[F::Elem]) -> Result<SAAlgebra<F>> {
    entry(label)?.instantiate(f, params)
}

pub fn equivalent_params<F: Field>(label: &str, f: &F, p1: &[F::Elem], p2: &[F::Elem]) -> Result<bool> {
    entry(label)?.equivalent(f, p1, p2)
}

pub fn family_members<F: Field>(label: &str, f: &F) -> Result<Vec<Vec<F::Elem>>> {
    entry(label)?.family_members(f)
}

/// One instantiated family member.
#[derive(Clone, Debug)]
pub struct CatalogMember<F: Field> {
    pub label: String,
    pub branch: String,
    pub params: Vec<F::Elem>,
    pub param_names: Vec<String>,
    pub algebra: SAAlgebra<F>,
}

impl<F: Field> CatalogMember<F> {
    pub fn is_abelian(&self) -> bool {
        self.branch == "abelian"
    }
    pub fn param_strings(&self) -> Vec<String> {
        let f = self.algebra.field();
        self.params.iter().map(|p| f.format_elem(p)).collect()
    }
    pub fn key(&self) -> String {
        member_key(&self.label, &self.param_strings())
    }
}

/// Every nilpotent algebra of the given dimension over a finite field, one
/// per isomorphism class, abelian first.
pub fn catalog_over_field<F: Field>(f: &F, dim: usize) -> Result<Vec<CatalogMember<F>>> {
    if f.order().is_none() {
        return Err(Error::UnsupportedField);
    }
    if !matches!(dim, 2 | 4 | 6 | 8 | 10) {
        return Err(Error::UnsupportedDim(dim));
    }
    let mut out = Vec::new();
    for e in catalog() {
        if e.dim() != dim || e.kind == EntryKind::Fixture {
            continue;
        }
        for params in e.family_members(f)? {
            out.push(CatalogMember {
                label: e.label.clone(),
                branch: e.branch.clone(),
                algebra: e.instantiate(f, &params)?,
                params,
                param_names: e.params.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Gf, Rationals};
    use crate::linalg::{unit_vec, vec_scale, xi, yi, Vector};

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    #[test]
    fn all_entries_parse_and_build() {
        let f = gf(3);
        for e in catalog() {
            for p in e.valid_params(&f).unwrap().into_iter().take(2) {
                let l = e.instantiate(&f, &p).unwrap();
                assert!(l.check_axioms().all_pass(), "{}", e.label);
                let nil = l.nilpotency_class().is_ok();
                assert_eq!(nil, e.label != "N4", "{}", e.label);
            }
        }
    }

    #[test]
    fn constraint_examples() {
        let f5 = gf(5);
        assert!(instantiate("P10(3,8)", &f5, &[1, 2]).is_ok());
        assert!(matches!(instantiate("P10(3,8)", &f5, &[1, 4]), Err(Error::ConstraintViolated(_))));
        assert!(matches!(instantiate("P10(3,8)", &gf(4), &[1, 2]), Err(Error::CharMismatch(_))));
        assert!(instantiate("P10(4,4)", &gf(3), &[0, 1]).is_ok());
        assert!(matches!(instantiate("Nope", &f5, &[]), Err(Error::UnknownLabel(_))));
        let p8 = instantiate("P8(2,3)", &gf(3), &[1]).unwrap();
        assert_eq!(p8.nilpotency_class().unwrap(), 5);
        let c = p8.center_rank();
        assert!(c.isotropic && c.center.dim() == 2);
    }

    #[test]
    fn rational_instantiation() {
        let q = Rationals;
        let half = q.parse_elem("1/2").unwrap();
        let l = entry("P8(2,3)").unwrap().instantiate(&q, &[half]).unwrap();
        assert!(l.check_axioms().all_pass());
        assert_eq!(l.nilpotency_class().unwrap(), 5);
        let two = q.from_i64(2);
        assert!(entry("P10(3,8)").unwrap().instantiate(&q, &[q.one(), two]).is_ok());
        assert!(matches!(
            entry("P10(3,8)").unwrap().instantiate(&q, &[q.one(), q.from_i64(4)]),
            Err(Error::ConstraintViolated(_))
        ));
        assert!(matches!(equivalent_params("P8(2,3)", &q, &[q.one()], &[q.one()]), Err(Error::UnsupportedField)));
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent_params("P8(2,3)", &gf(7), &[1], &[6]).unwrap());
        assert!(!equivalent_params("P8(2,3)", &gf(7), &[1], &[2]).unwrap());
        assert!(!equivalent_params("P10(2,2)", &gf(3), &[1], &[2]).unwrap());
    }

    #[test]
    fn family_counts() {
        let counts = |label: &str, q: u64| family_members(label, &gf(q)).unwrap().len();
        assert_eq!(counts("P8(2,3)", 3), 1);
        assert_eq!(counts("P8(2,3)", 7), 3);
        assert_eq!(counts("P10(2,6)", 3), 2);
        assert_eq!(counts("P10(2,2)", 3), 2);
        assert_eq!(counts("P10(3,6)", 7), 3);
        assert_eq!(counts("P10(3,8)", 5), 1);
        assert_eq!(counts("P10(3,8)", 7), 3);
        assert_eq!(counts("P10(3,8)", 4), 0);
        assert_eq!(counts("P10(3,9)", 4), 3);
        assert_eq!(counts("P10(3,9)", 2), 1);
        assert_eq!(counts("P10(3,9)", 8), 1);
        assert_eq!(counts("P10(3,9)", 3), 0);
        for q in [2, 3, 4, 5, 7, 8] {
            assert_eq!(counts("P10(4,4)", q), 1, "type C over GF({q})");
        }
    }

    #[test]
    fn catalog_counts_gf3() {
        let f = gf(3);
        let by_dim = |d| catalog_over_field(&f, d).unwrap();
        assert_eq!(by_dim(6).len(), 2);
        let d8 = by_dim(8);
        assert_eq!(d8.iter().filter(|m| !m.is_abelian()).count(), 3);
        assert_eq!(d8.len(), 4);
        let d10 = by_dim(10);
        assert_eq!(d10.iter().filter(|m| !m.is_abelian()).count(), 25);
        let branch = |b: &str| d10.iter().filter(|m| m.branch == b).count();
        assert_eq!(
            [branch("non_isotropic_center"), branch("center5"), branch("center4"), branch("center3"), branch("center2")],
            [3, 1, 4, 8, 9]
        );
    }

    #[test]
    fn equivalence_is_an_equivalence_relation() {
        for q in [2u64, 3, 4, 5, 7, 8, 9].into_iter().filter(|&q| q != 9) {
            let f = gf(q);
            for e in catalog().iter().filter(|e| !e.params.is_empty() && e.kind == EntryKind::Census) {
                let ps = e.valid_params(&f).unwrap();
                let ps: Vec<_> = ps.into_iter().take(12).collect();
                for a in &ps {
                    assert!(e.equivalent(&f, a, a).unwrap());
                    for b in &ps {
                        let ab = e.equivalent(&f, a, b).unwrap();
                        assert_eq!(ab, e.equivalent(&f, b, a).unwrap(), "{} over GF({q})", e.label);
                        for c in &ps {
                            if ab && e.equivalent(&f, b, c).unwrap() {
                                assert!(e.equivalent(&f, a, c).unwrap(), "{} over GF({q})", e.label);
                            }
                        }
                    }
                }
            }
        }
    }

    /// New basis given as (index, coefficient) pairs: tilde e_k = c e_k.
    fn diagonal(f: &Gf, n: usize, scale: &[(usize, u8)]) -> Vec<Vector<u8>> {
        let d = 2 * n;
        (0..d)
            .map(|k| {
                let c = scale.iter().find(|(i, _)| *i == k).map(|(_, c)| *c).unwrap_or(1);
                vec_scale(f, &c, &unit_vec(f, d, k))
            })
            .collect()
    }

    fn check_scaling(label: &str, q: u64, r: u8, a: u8, scale: impl Fn(&Gf, u8) -> Vec<(usize, u8)>, k: u64) {
        let f = gf(q);
        let l = instantiate(label, &f, &[r]).unwrap();
        let basis = diagonal(&f, l.n(), &scale(&f, a));
        assert!(l.form().is_symplectic_basis(&f, &basis));
        let moved = l.change_basis(&basis);
        let r2 = f.mul(&f.pow(&a, k), &r);
        assert_eq!(moved, instantiate(label, &f, &[r2]).unwrap(), "{label}");
    }

    #[test]
    fn scaling_maps_transport_parameters() {
        let inv = |f: &Gf, a: u8| f.inv(&a).unwrap();
        let pw = |f: &Gf, a: u8, e: i64| {
            if e >= 0 {
                f.pow(&a, e as u64)
            } else {
                f.pow(&f.inv(&a).unwrap(), (-e) as u64)
            }
        };
        for a in 1..7u8 {
            check_scaling(
                "P8(2,3)",
                7,
                2,
                a,
                |f, a| vec![(xi(2), a), (yi(2), inv(f, a)), (xi(3), inv(f, a)), (yi(3), a), (xi(4), inv(f, a)), (yi(4), a)],
                3,
            );
            for label in ["P10(3,6)", "P10(3,7)"] {
                check_scaling(
                    label,
                    7,
                    3,
                    a,
                    |f, b| {
                        vec![
                            (xi(2), b),
                            (yi(2), inv(f, b)),
                            (xi(3), b),
                            (yi(3), inv(f, b)),
                            (xi(4), inv(f, b)),
                            (yi(4), b),
                            (xi(5), inv(f, b)),
                            (yi(5), b),
                        ]
                    },
                    3,
                );
            }
            check_scaling(
                "P10(2,2)",
                7,
                3,
                a,
                |f, b| {
                    vec![
                        (xi(2), inv(f, b)),
                        (yi(2), b),
                        (xi(3), b),
                        (yi(3), inv(f, b)),
                        (xi(4), inv(f, b)),
                        (yi(4), b),
                        (xi(5), pw(f, b, -2)),
                        (yi(5), pw(f, b, 2)),
                    ]
                },
                4,
            );
            check_scaling(
                "P10(2,4)",
                7,
                3,
                a,
                |f, a| {
                    let exps = [1i64, 3, 5, -4, -2];
                    (0..5)
                        .flat_map(|i| [(xi(i + 1), pw(f, a, exps[i])), (yi(i + 1), pw(f, a, -exps[i]))])
                        .collect()
                },
                11,
            );
            check_scaling(
                "P10(2,5)",
                7,
                3,
                a,
                |f, a| vec![(xi(2), a), (yi(2), inv(f, a)), (xi(3), inv(f, a)), (yi(3), a), (xi(5), inv(f, a)), (yi(5), a)],
                3,
            );
            check_scaling(
                "P10(2,6)",
                7,
                3,
                a,
                |f, a| {
                    let exps = [-1i64, 4, -3, 2, -5];
                    (0..5)
                        .flat_map(|i| [(xi(i + 1), pw(f, a, exps[i])), (yi(i + 1), pw(f, a, -exps[i]))])
                        .collect()
                },
                12,
            );
        }
    }
}
