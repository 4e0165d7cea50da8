//! Central series, ideals, isotropic chains, nilpotent presentations and the
//! maximal-class machinery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{darboux_complete, is_zero_vec, unit_vec, vec_add, vec_sub, xi, yi, Subspace, Vector};
use crate::saa_core::algebra::SAAlgebra;
use crate::saa_core::presentation::Presentation;

type Space<F> = Subspace<<F as Field>::Elem>;

/// Lower and upper central series.
#[derive(Clone, Debug)]
pub struct CentralSeries<E> {
    /// L^1, L^2, ..., ending with the first repeated term (0 when nilpotent).
    pub lower: Vec<Subspace<E>>,
    /// Z_0, Z_1, ..., ending with the first repeated term (L when nilpotent).
    pub upper: Vec<Subspace<E>>,
    /// Smallest c with L^{c+1} = 0.
    pub class: Option<usize>,
}

impl<E: Clone + PartialEq> CentralSeries<E> {
    /// L^k (1-based); terms past the end equal the last term.
    pub fn l(&self, k: usize) -> &Subspace<E> {
        &self.lower[(k.max(1) - 1).min(self.lower.len() - 1)]
    }
    /// Z_k; terms past the end equal the last term.
    pub fn z(&self, k: usize) -> &Subspace<E> {
        &self.upper[k.min(self.upper.len() - 1)]
    }
    pub fn is_nilpotent(&self) -> bool {
        self.class.is_some()
    }
    pub fn lower_dims(&self) -> Vec<usize> {
        self.lower.iter().map(|s| s.dim()).collect()
    }
    pub fn upper_dims(&self) -> Vec<usize> {
        self.upper.iter().map(|s| s.dim()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CenterInfo<E> {
    pub center: Subspace<E>,
    pub rank: usize,
    pub isotropic: bool,
}

#[derive(Clone, Debug)]
pub struct IdealInfo<E> {
    pub closure: Subspace<E>,
    pub is_ideal: bool,
    pub perp_is_ideal: bool,
    pub is_abelian: bool,
}

/// A split L = I (+) I^perp along a hyperbolic plane I inside the center.
#[derive(Clone, Debug)]
pub struct DirectSplit<F: Field> {
    /// The 2-dimensional abelian summand.
    pub plane: SAAlgebra<F>,
    /// The induced algebra on I^perp.
    pub rest: SAAlgebra<F>,
    /// Standard basis of L: the plane's pair first, then I^perp.
    pub basis: Vec<Vector<F::Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityProbe {
    pub is_lie: bool,
    pub is_associative: bool,
}

impl<F: Field> SAAlgebra<F> {
    pub fn central_series(&self) -> CentralSeries<F::Elem> {
        let full = self.full_space();
        let mut lower = vec![full.clone()];
        loop {
            let last = lower.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.product_space(last, &full);
            if next == *last {
                break;
            }
            lower.push(next);
        }
        let class = if lower.last().unwrap().is_zero() { Some(lower.len() - 1) } else { None };
        let mut upper = vec![self.zero_space()];
        loop {
            let last = upper.last().unwrap();
            if last.is_full() {
                break;
            }
            let next = self.colon(&full, &full, last);
            if next == *last {
                break;
            }
            upper.push(next);
        }
        CentralSeries { lower, upper, class }
    }

    /// `Err(NotNilpotent)` for non-nilpotent algebras.
    pub fn nilpotency_class(&self) -> Result<usize> {
        self.central_series().class.ok_or(Error::NotNilpotent)
    }

    pub fn center(&self) -> Space<F> {
        let full = self.full_space();
        self.colon(&full, &full, &self.zero_space())
    }

    pub fn center_rank(&self) -> CenterInfo<F::Elem> {
        let center = self.center();
        let l2 = self.product_space(&self.full_space(), &self.full_space());
        CenterInfo {
            rank: self.dim() - l2.dim(),
            isotropic: self.is_isotropic(&center),
            center,
        }
    }

    pub fn is_ideal(&self, s: &Space<F>) -> bool {
        let p = self.product_space(s, &self.full_space());
        s.contains_space(self.field(), &p)
    }

    /// Smallest ideal containing `s`.
    pub fn ideal_closure(&self, s: &Space<F>) -> Space<F> {
        let full = self.full_space();
        let mut cur = s.clone();
        loop {
            let next = self.join(&cur, &self.product_space(&cur, &full));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn ideal_ops(&self, s: &Space<F>) -> IdealInfo<F::Elem> {
        let closure = self.ideal_closure(s);
        let is_ideal = closure == *s;
        IdealInfo {
            perp_is_ideal: self.is_ideal(&self.perp(s)),
            is_abelian: self.product_space(s, s).is_zero(),
            is_ideal,
            closure,
        }
    }

    /// Splits off a hyperbolic plane of the center when the center is not
    /// isotropic.
    pub fn direct_sum_split(&self) -> Result<DirectSplit<F>> {
        let f = self.field();
        let z = self.center();
        let zb = z.basis();
        let mut pair = None;
        'outer: for (i, u) in zb.iter().enumerate() {
            for w in &zb[i + 1..] {
                let c = self.pair(u, w);
                if let Some(ci) = f.inv(&c) {
                    pair = Some((u.clone(), crate::linalg::vec_scale(f, &ci, w)));
                    break 'outer;
                }
            }
        }
        let (u, v) = pair.ok_or(Error::CenterIsotropic)?;
        let plane = self.span(vec![u.clone(), v.clone()]);
        let rest_space = self.perp(&plane);
        let rest_basis = symplectic_basis(self, &rest_space);
        let mut basis = vec![u, v];
        basis.extend(rest_basis.iter().cloned());
        let whole = self.change_basis(&basis);
        let d = self.dim();
        let m = d - 2;
        let mut gamma = vec![f.zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    gamma[(i * m + j) * m + k] = whole.gamma(i + 2, j + 2, k + 2).clone();
                }
            }
        }
        Ok(DirectSplit {
            plane: SAAlgebra::abelian(f, 1),
            rest: SAAlgebra::from_tensor(f, self.n() - 1, gamma),
            basis,
        })
    }

    /// Ascending chain I_0 < I_1 < ... < I_n of isotropic ideals with
    /// dim I_r = r.
    pub fn isotropic_chain(&self) -> Result<Vec<Space<F>>> {
        let series = self.central_series();
        if !series.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let f = self.field();
        let full = self.full_space();
        let mut chain = vec![self.zero_space()];
        for _ in 0..self.n() {
            let i = chain.last().unwrap();
            // Deepest term I^perp L...L (m factors) not inside I.
            let mut cur = self.perp(i);
            let mut best = cur.clone();
            loop {
                let next = self.product_space(&cur, &full);
                if i.contains_space(f, &next) {
                    break;
                }
                best = next.clone();
                cur = next;
            }
            let u = best
                .basis()
                .iter()
                .find(|r| !i.contains(f, r))
                .expect("term not inside I")
                .clone();
            chain.push(i.extend(f, &[u]));
        }
        Ok(chain)
    }

    /// A standard basis adapted to the isotropic chain, in which the algebra
    /// has a nilpotent presentation.
    pub fn nilpotent_basis(&self) -> Result<Vec<Vector<F::Elem>>> {
        let chain = self.isotropic_chain()?;
        darboux_complete(self.field(), &chain[1..], &self.form())
    }

    pub fn extract_nilpotent_presentation(&self) -> Result<Presentation> {
        let b = self.nilpotent_basis()?;
        Ok(self.change_basis(&b).to_presentation())
    }

    /// Checks that the algebra's own basis gives a nilpotent presentation:
    /// the only nonzero sorted triples are (x_i y_j, y_k) and (y_i y_j, y_k)
    /// with i < j < k.
    pub fn is_nilpotent_presentation(&self) -> bool {
        self.triples().iter().all(|&(a, b, c, _)| {
            let (ia, ib, ic) = (a / 2, b / 2, c / 2);
            b % 2 == 1 && c % 2 == 1 && ia < ib && ib < ic
        })
    }

    /// Maximal-class criterion read off a nilpotent presentation basis: the
    /// products x_k y_(k+1) for 2 <= k <= n-2 are nonzero and x1 y2, y1 y2
    /// are linearly independent.
    pub fn maximal_class_test(&self) -> Result<bool> {
        let n = self.n();
        if 2 * n < 8 {
            return Err(Error::DimensionTooSmall(2 * n));
        }
        if !self.is_nilpotent_presentation() {
            return Err(Error::NotNilpotentPresentation(
                "triples outside the nilpotent shape".into(),
            ));
        }
        let f = self.field();
        let d = self.dim();
        for k in 2..=n - 2 {
            if is_zero_vec(f, self.basis_product(xi(k), yi(k + 1))) {
                return Ok(false);
            }
        }
        let a = self.basis_product(xi(1), yi(2)).clone();
        let b = self.basis_product(yi(1), yi(2)).clone();
        Ok(Subspace::span_unchecked(f, d, vec![a, b]).dim() == 2)
    }

    /// Full flag of characteristic ideals for an algebra of maximal class,
    /// dimension at least 10.
    pub fn characteristic_chain_maximal(&self) -> Result<Vec<Space<F>>> {
        let n = self.n();
        let d = self.dim();
        if d < 10 {
            return Err(Error::DimensionTooSmall(d));
        }
        let s = self.central_series();
        if s.class != Some(d - 3) {
            return Err(Error::NotMaximalClass);
        }
        let f = self.field();
        let i1 = self.product_space(s.z(3), s.l(2));
        if i1.dim() != 1 {
            return Err(Error::NotMaximalClass);
        }
        // I_1 = Z_3 L^2, I_j = Z_(j-1) for 2 <= j <= n-1.
        let small = |j: usize| -> Space<F> {
            if j == 1 {
                i1.clone()
            } else {
                s.z(j - 1).clone()
            }
        };
        let ll = self.product_space(s.l(n - 1), s.l(n - 2));
        let k = (1..=n - 3)
            .find(|&k| small(k + 1).contains_space(f, &ll))
            .ok_or(Error::NotMaximalClass)?;
        let j = self.meet(&ll, &small(k));
        let mid = self.colon(s.l(n - 1), s.l(n - 2), &j);
        let mut members: Vec<Space<F>> = vec![self.zero_space(), i1.clone(), self.perp(&i1), mid];
        members.extend(s.upper.iter().cloned());
        members.sort_by_key(|m| m.dim());
        members.dedup();
        let ok = members.len() == d + 1
            && members.iter().enumerate().all(|(r, m)| m.dim() == r)
            && members.windows(2).all(|w| w[1].contains_space(f, &w[0]))
            && members.iter().all(|m| self.is_ideal(m));
        if !ok {
            return Err(Error::NotMaximalClass);
        }
        Ok(members)
    }

    pub fn identity_probe(&self) -> IdentityProbe {
        let f = self.field();
        let d = self.dim();
        let e: Vec<Vector<F::Elem>> = (0..d).map(|i| unit_vec(f, d, i)).collect();
        let mut is_lie = true;
        let mut is_associative = true;
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let a = self.mul(ij, &e[k]);
                    let b = self.mul(self.basis_product(j, k), &e[i]);
                    let c = self.mul(self.basis_product(k, i), &e[j]);
                    if !is_zero_vec(f, &vec_add(f, &vec_add(f, &a, &b), &c)) {
                        is_lie = false;
                    }
                    let r = self.mul(&e[i], self.basis_product(j, k));
                    if !is_zero_vec(f, &vec_sub(f, &a, &r)) {
                        is_associative = false;
                    }
                }
            }
        }
        IdentityProbe { is_lie, is_associative }
    }
}

/// Symplectic Gram-Schmidt on a non-degenerate subspace, returning a
/// standard basis x1, y1, x2, y2, ... of it. Partners are the lowest-index
/// remaining vectors.
pub fn symplectic_basis<F: Field>(l: &SAAlgebra<F>, s: &Space<F>) -> Vec<Vector<F::Elem>> {
    let f = l.field();
    let mut rest: Vec<Vector<F::Elem>> = s.basis().to_vec();
    let mut out = Vec::new();
    while let Some(u) = rest.first().cloned() {
        rest.remove(0);
        let Some(pos) = rest.iter().position(|w| !f.is_zero(&l.pair(&u, w))) else {
            // degenerate subspace: stop
            break;
        };
        let w = rest.remove(pos);
        let c = f.inv(&l.pair(&u, &w)).unwrap();
        let v = crate::linalg::vec_scale(f, &c, &w);
        rest = rest
            .into_iter()
            .map(|z| {
                // z - (z,v) u + (z,u) v
                let mut z2 = z.clone();
                let a = f.neg(&l.pair(&z, &v));
                crate::linalg::axpy(f, &mut z2, &a, &u);
                let b = l.pair(&z, &u);
                crate::linalg::axpy(f, &mut z2, &b, &v);
                z2
            })
            .collect();
        out.push(u);
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Gf};

    fn build(n: usize, t: &[(&str, &str, &str, &str)]) -> SAAlgebra<Gf> {
        let f = Gf::prime(3).unwrap();
        let p = Presentation::from_named(FieldSpec::Prime(3), n, t).unwrap();
        SAAlgebra::from_presentation(&f, &p).unwrap()
    }

    #[test]
    fn dim4_not_nilpotent() {
        let l = build(2, &[("x1", "y1", "y2", "1")]);
        let f = l.field().clone();
        let s = l.central_series();
        assert!(s.class.is_none());
        assert_eq!(s.z(1), &Subspace::coordinate(&f, 4, &[xi(2)]));
        assert_eq!(s.l(2), &Subspace::coordinate(&f, 4, &[xi(1), xi(2), yi(1)]));
        assert_eq!(l.perp(s.z(1)), *s.l(2));
        assert!(matches!(l.isotropic_chain(), Err(Error::NotNilpotent)));
    }

    #[test]
    fn abelian_class_one() {
        let f = Gf::prime(3).unwrap();
        let l = SAAlgebra::abelian(&f, 3);
        assert_eq!(l.nilpotency_class().unwrap(), 1);
        let c = l.center_rank();
        assert_eq!((c.center.dim(), c.rank, c.isotropic), (6, 6, false));
        assert!(l.extract_nilpotent_presentation().unwrap().triples.is_empty());
        let p = l.identity_probe();
        assert!(p.is_lie && p.is_associative);
    }

    #[test]
    fn p6_chain_and_class() {
        let l = build(3, &[("y1", "y2", "y3", "1")]);
        let f = l.field().clone();
        assert_eq!(l.nilpotency_class().unwrap(), 2);
        let chain = l.isotropic_chain().unwrap();
        assert_eq!(chain[3], Subspace::coordinate(&f, 6, &[xi(1), xi(2), xi(3)]));
        assert!(l.identity_probe().is_lie);
    }

    #[test]
    fn p8_23_extraction_round_trip() {
        let l = build(4, &[("x2", "y3", "y4", "1"), ("x1", "y2", "y4", "1"), ("y1", "y2", "y3", "1")]);
        assert_eq!(l.nilpotency_class().unwrap(), 5);
        assert!(l.maximal_class_test().unwrap());
        let b = l.nilpotent_basis().unwrap();
        assert!(l.form().is_symplectic_basis(l.field(), &b));
        let k = l.change_basis(&b);
        assert!(k.is_nilpotent_presentation());
        assert!(k.check_axioms().all_pass());
    }

    #[test]
    fn q10_71_split() {
        let l = build(5, &[("y1", "y2", "y3", "1")]);
        let c = l.center_rank();
        assert!(!c.isotropic);
        let s = l.direct_sum_split().unwrap();
        assert!(s.plane.is_abelian());
        assert_eq!(s.rest.dim(), 8);
        assert!(s.rest.check_axioms().all_pass());
        assert!(l.form().is_symplectic_basis(l.field(), &s.basis));
        assert_eq!(s.rest.nilpotency_class().unwrap(), 2);
        let p832 = build(4, &[("y1", "y2", "y3", "1"), ("x1", "y3", "y4", "1")]);
        assert!(matches!(p832.direct_sum_split(), Err(Error::CenterIsotropic)));
    }

    #[test]
    fn maximal_class_chain_dim10() {
        // P10(2,7)
        let l = build(
            5,
            &[("x2", "y3", "y5", "1"), ("x3", "y4", "y5", "1"), ("x1", "y2", "y4", "1"), ("y1", "y2", "y3", "1")],
        );
        assert_eq!(l.nilpotency_class().unwrap(), 7);
        let chain = l.characteristic_chain_maximal().unwrap();
        assert_eq!(chain.len(), 11);
        let s = l.central_series();
        assert_eq!(chain[1], l.product_space(s.z(3), s.l(2)));
        let p8 = build(4, &[("x2", "y3", "y4", "1"), ("x1", "y2", "y4", "1"), ("y1", "y2", "y3", "1")]);
        assert!(matches!(p8.characteristic_chain_maximal(), Err(Error::DimensionTooSmall(8))));
    }

    #[test]
    fn ideal_examples() {
        let l = build(4, &[("y1", "y2", "y3", "1"), ("x1", "y3", "y4", "1")]);
        let z = l.center();
        let info = l.ideal_ops(&z);
        assert!(info.is_ideal && info.perp_is_ideal && info.is_abelian);
        assert_eq!(z.dim(), 3);
    }
}
