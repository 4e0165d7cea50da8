//! Classification of nilpotent algebras against the catalog: fingerprints
//! select the candidates and the isomorphism search decides among them.

use serde::Serialize;

use super::fingerprint::{fingerprint, Fingerprint};
use super::iso::{is_isomorphic, IsoWitness, Verdict};
use crate::catalog::{catalog_over_field, CatalogMember};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::saa_core::SAAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: String,
    pub params: Vec<String>,
    /// `label[p1,p2,...]`, or the bare label without parameters.
    pub key: String,
    pub branch: String,
    /// Search nodes spent across all candidates.
    pub nodes: u64,
}

/// The catalog members of one dimension over one field with their
/// fingerprints, built once and shared by every classification.
pub struct CatalogIndex<F: Field> {
    members: Vec<(CatalogMember<F>, Fingerprint)>,
    dim: usize,
    budget: Option<u64>,
}

impl<F: Field> CatalogIndex<F> {
    pub fn new(f: &F, dim: usize) -> Result<Self> {
        let members = catalog_over_field(f, dim)?
            .into_iter()
            .map(|m| {
                let fp = fingerprint(&m.algebra)?;
                Ok((m, fp))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CatalogIndex { members, dim, budget: None })
    }

    /// Bounds each isomorphism search; an exhausted budget makes
    /// [`classify`](Self::classify) fail with `NoMatch`.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn classify(&self, l: &SAAlgebra<F>) -> Result<Classification> {
        self.classify_with_witness(l).map(|(c, _)| c)
    }

    /// As [`classify`](Self::classify), also returning the isomorphism from
    /// the catalog member onto `l`.
    pub fn classify_with_witness(&self, l: &SAAlgebra<F>) -> Result<(Classification, IsoWitness<F::Elem>)> {
        if l.dim() != self.dim {
            return Err(Error::DimMismatch);
        }
        let fp = fingerprint(l)?;
        let mut nodes = 0;
        let mut found: Option<(Classification, IsoWitness<F::Elem>)> = None;
        let mut unknown = false;
        for (m, mfp) in &self.members {
            if *mfp != fp {
                continue;
            }
            let rep = is_isomorphic(&m.algebra, l, self.budget)?;
            nodes += rep.nodes;
            match rep.verdict {
                Verdict::Isomorphic(w) => {
                    if let Some((prev, _)) = &found {
                        return Err(Error::NoMatch(format!(
                            "ambiguous: isomorphic to both {} and {}",
                            prev.key,
                            m.key()
                        )));
                    }
                    let c = Classification {
                        label: m.label.clone(),
                        params: m.param_strings(),
                        key: m.key(),
                        branch: m.branch.clone(),
                        nodes: 0,
                    };
                    found = Some((c, w));
                }
                Verdict::Unknown => unknown = true,
                Verdict::NotIsomorphic => {}
            }
        }
        match found {
            Some((mut c, w)) => {
                c.nodes = nodes;
                Ok((c, w))
            }
            None => {
                let why = if unknown { "search budget exhausted" } else { "no catalog member matches" };
                let dump = serde_json::to_string(&fp).expect("fingerprint serializes");
                Err(Error::NoMatch(format!("{why}; fingerprint {dump}")))
            }
        }
    }
}

/// Classifies one algebra, building a fresh index for its field and
/// dimension.
pub fn classify<F: Field>(l: &SAAlgebra<F>) -> Result<Classification> {
    if l.field().order().is_none() {
        return Err(Error::UnsupportedField);
    }
    CatalogIndex::new(l.field(), l.dim())?.classify(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, entry, EntryKind};
    use crate::field::{FieldSpec, Gf, Rationals};
    use crate::linalg::random_symplectic_basis;
    use rand::SeedableRng;

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_up_to_parameter_equivalence() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for q in [3, 4, 5] {
            let f = gf(q);
            for dim in [6, 8, 10] {
                let idx = CatalogIndex::new(&f, dim).unwrap();
                for e in catalog().iter().filter(|e| e.kind != EntryKind::Fixture && e.dim() == dim) {
                    for p in e.valid_params(&f).unwrap().into_iter().take(4) {
                        let l = e.instantiate(&f, &p).unwrap();
                        let moved = l.change_basis(&random_symplectic_basis(&f, l.n(), 12, &mut rng));
                        let c = idx.classify(&moved).unwrap();
                        assert_eq!(c.label, e.label);
                        let cp: Vec<u8> = c.params.iter().map(|s| f.parse_elem(s).unwrap()).collect();
                        assert!(e.equivalent(&f, &p, &cp).unwrap(), "{} {p:?} -> {:?}", e.label, c.params);
                    }
                }
            }
        }
    }

    #[test]
    fn p42_example_and_errors() {
        let f = gf(3);
        let l = entry("P10(4,2)").unwrap().instantiate(&f, &[]).unwrap();
        let c = classify(&l).unwrap();
        assert_eq!((c.label.as_str(), c.params.len()), ("P10(4,2)", 0));
        let q = Rationals;
        let lq = entry("P6(3,1)").unwrap().instantiate(&q, &[]).unwrap();
        assert!(matches!(classify(&lq), Err(Error::UnsupportedField)));
        let n4 = entry("N4").unwrap().instantiate(&f, &[]).unwrap();
        assert!(matches!(classify(&n4), Err(Error::NotNilpotent)));
    }
}
