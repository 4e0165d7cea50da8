//! Isomorphism invariants of a nilpotent algebra: central series dims,
//! products of their terms, the branch of the decision tree it falls into
//! and the dims of the branch-specific characteristic subspaces.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::branch::{tau_minpoly, type_abc};
use super::charsub::characteristic_family;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Subspace;
use crate::saa_core::SAAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub field: String,
    pub lower_dims: Vec<usize>,
    pub upper_dims: Vec<usize>,
    pub class: usize,
    pub center_dim: usize,
    pub center_isotropic: bool,
    pub l2l2: usize,
    pub l3l3: usize,
    pub l3l2: usize,
    /// `None` marks a flag that carries no information for this algebra
    /// (abelian, or dimension below 8).
    pub l3_eq_z: Option<bool>,
    pub l3l2_le_z: Option<bool>,
    pub l3l3_le_z: Option<bool>,
    pub l3l2_eq_l5: Option<bool>,
    pub l4l3_eq_l7: Option<bool>,
    pub l5l2_le_l4l3: Option<bool>,
    pub branch: String,
    /// Type A/B/C or the tau class, where defined.
    pub discriminant: Option<String>,
    pub subspaces: BTreeMap<String, usize>,
    /// Digest of the characteristic family signature.
    pub family: String,
}

/// Branch tag of the decision tree; these names match the catalog.
pub fn branch_of<F: Field>(l: &SAAlgebra<F>) -> Result<&'static str> {
    let s = l.central_series();
    if !s.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    if l.is_abelian() {
        return Ok("abelian");
    }
    Ok(match l.dim() {
        6 => "dim6",
        8 => "dim8",
        10 => {
            let c = l.center_rank();
            match (c.isotropic, c.center.dim()) {
                (false, _) => "non_isotropic_center",
                (true, 5) => "center5",
                (true, 4) => "center4",
                (true, 3) => "center3",
                (true, 2) => "center2",
                _ => "other",
            }
        }
        _ => "other",
    })
}

pub fn fingerprint<F: Field>(l: &SAAlgebra<F>) -> Result<Fingerprint> {
    let s = l.central_series();
    let class = s.class.ok_or(Error::NotNilpotent)?;
    let f = l.field();
    let c = l.center_rank();
    let lk = |k: usize| s.l(k).clone();
    let prod = |a: &Subspace<F::Elem>, b: &Subspace<F::Elem>| l.product_space(a, b);
    let (l2, l3, l4) = (lk(2), lk(3), lk(4));
    let l2l2 = prod(&l2, &l2);
    let l3l3 = prod(&l3, &l3);
    let l3l2 = prod(&l3, &l2);
    let l4l3 = prod(&l4, &l3);
    let l5l2 = prod(&lk(5), &l2);
    let meaningful = !l.is_abelian() && l.dim() >= 8;
    let flag = |b: bool| meaningful.then_some(b);
    let branch = branch_of(l)?;

    let mut subspaces: BTreeMap<String, usize> = BTreeMap::new();
    let put = |m: &mut BTreeMap<String, usize>, name: &str, sp: &Subspace<F::Elem>| {
        m.insert(name.to_string(), sp.dim());
    };
    let mut discriminant = None;
    match branch {
        "center4" if l3 == c.center && f.order().is_some() => {
            discriminant = Some(format!("{:?}", type_abc(l)?.kind));
        }
        "center3" if l3.dim() == 5 => {
            let v = l.perp(&l2l2);
            let v2 = prod(&v, &v);
            put(&mut subspaces, "V", &v);
            put(&mut subspaces, "V2", &v2);
            put(&mut subspaces, "V2+L4", &l.join(&v2, &l4));
            put(&mut subspaces, "V3", &prod(&v2, &v));
            subspaces.insert("V2<=L4".into(), l.le(&v2, &l4) as usize);
            subspaces.insert("V2<=L3".into(), l.le(&v2, &l3) as usize);
        }
        "center3" if l3.dim() == 6 => {
            if l3l2 == lk(5) {
                if f.order().is_some() {
                    let t = tau_minpoly(l)?;
                    discriminant = Some(format!("{:?}", t.class));
                }
            } else {
                let z4 = s.z(4).clone();
                let target = l.meet(&l3l2, &lk(5));
                let u = l.colon(&l3, &l2, &target);
                let uz4 = prod(&u, &z4);
                put(&mut subspaces, "U", &u);
                put(&mut subspaces, "UZ4", &uz4);
                let v = l.colon(&z4, &u, &l.zero_space());
                put(&mut subspaces, "V", &v);
                put(&mut subspaces, "V2", &prod(&v, &v));
            }
        }
        "center2" if class == 6 => {
            let w = l.colon(&l4, &l2, &l3l3);
            let sp = l.colon(&l3, &l2, &l3l3);
            let t = l.colon(&l2, &l.perp(&sp), &l.zero_space());
            let r = l.colon(&l.perp(&l3l3), &l.perp(&t), &l.zero_space());
            put(&mut subspaces, "W", &w);
            put(&mut subspaces, "S", &sp);
            put(&mut subspaces, "T", &t);
            put(&mut subspaces, "R", &r);
        }
        "center2" if class == 7 => {
            let ideals = [l5l2.clone(), lk(7), lk(6)];
            let k = ideals.iter().position(|i| !l.meet(i, &l4l3).is_zero());
            subspaces.insert("k".into(), k.map_or(0, |k| k + 1));
            if let Some(k) = k {
                let u = l.colon(&l4, &l3, &ideals[k]);
                put(&mut subspaces, "U", &u);
                put(&mut subspaces, "UL2", &prod(&u, &l2));
            }
            let v = l.colon(&l2, &l4, &l5l2);
            put(&mut subspaces, "V", &v);
            put(&mut subspaces, "W", &l.colon(&l4, &v, &l.zero_space()));
        }
        _ => {}
    }

    let fam = characteristic_family(l);
    let mut h = Sha256::new();
    for t in &fam.signature {
        h.update(format!("{t:?};").as_bytes());
    }
    let mut family = String::new();
    for b in &h.finalize()[..8] {
        write!(family, "{b:02x}").unwrap();
    }

    Ok(Fingerprint {
        dim: l.dim(),
        field: f.spec().name(),
        lower_dims: s.lower_dims(),
        upper_dims: s.upper_dims(),
        class,
        center_dim: c.center.dim(),
        center_isotropic: c.isotropic,
        l2l2: l2l2.dim(),
        l3l3: l3l3.dim(),
        l3l2: l3l2.dim(),
        l3_eq_z: flag(l3 == c.center),
        l3l2_le_z: flag(l.le(&l3l2, &c.center)),
        l3l3_le_z: flag(l.le(&l3l3, &c.center)),
        l3l2_eq_l5: flag(l3l2 == lk(5)),
        l4l3_eq_l7: flag(l4l3 == lk(7)),
        l5l2_le_l4l3: flag(l.le(&l5l2, &l4l3)),
        branch: branch.to_string(),
        discriminant,
        subspaces,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry, instantiate};
    use crate::field::{FieldSpec, Gf};

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    fn inst(label: &str, f: &Gf, params: &[&str]) -> SAAlgebra<Gf> {
        let p: Vec<u8> = params.iter().map(|s| f.parse_elem(s).unwrap()).collect();
        instantiate(label, f, &p).unwrap()
    }

    #[test]
    fn examples() {
        let f = gf(3);
        let p31 = fingerprint(&inst("P10(3,1)", &f, &[])).unwrap();
        assert_eq!((p31.center_dim, p31.lower_dims[2]), (3, 5));
        assert!(p31.center_isotropic);
        let p21 = fingerprint(&inst("P10(2,1)", &f, &[])).unwrap();
        assert_eq!(p21.class, 6);
        assert!(p21.l3l3 > 0);
        assert_eq!(p21.l3l3_le_z, Some(true));
        let a = fingerprint(&SAAlgebra::abelian(&f, 5)).unwrap();
        assert_eq!((a.l2l2, a.l3l3, a.l3l2, a.center_dim), (0, 0, 0, 10));
        assert_eq!(a.branch, "abelian");
        assert!(entry("N4").is_ok());
        let n4 = inst("N4", &f, &[]);
        assert!(matches!(fingerprint(&n4), Err(Error::NotNilpotent)));
    }

    #[test]
    fn p31_and_p32_differ() {
        let f = gf(3);
        let a = fingerprint(&inst("P10(3,1)", &f, &[])).unwrap();
        let b = fingerprint(&inst("P10(3,2)", &f, &[])).unwrap();
        assert_ne!(a.subspaces.get("V2<=L4"), b.subspaces.get("V2<=L4"));
    }
}
