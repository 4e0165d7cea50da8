//! The algebra itself: a dense antisymmetric triple tensor plus the
//! standard alternating form, with products derived from the tensor.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{
    axpy, inverse, is_zero_vec, unit_vec, zero_vec, Subspace, SymplecticForm, Vector,
};
use crate::saa_core::presentation::{sort_triple, Presentation};

/// A symplectic alternating algebra of dimension 2n in the standard basis.
#[derive(Clone, Debug)]
pub struct SAAlgebra<F: Field> {
    field: F,
    n: usize,
    /// gamma[(i*d + j)*d + k] = (e_i e_j, e_k)
    gamma: Vec<F::Elem>,
    /// table[i*d + j] = e_i e_j
    table: Vec<Vector<F::Elem>>,
}

/// Results of checking the defining identities on basis elements.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    pub alternating: bool,
    pub cyclic: bool,
    pub self_adjoint: bool,
    pub nondegenerate: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.alternating && self.cyclic && self.self_adjoint && self.nondegenerate
    }
}

impl<F: Field> PartialEq for SAAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field.spec() == other.field.spec() && self.gamma == other.gamma
    }
}

impl<F: Field> SAAlgebra<F> {
    /// Builds the algebra from sorted triples (a < b < c), extending by
    /// antisymmetry.
    pub fn from_triples(field: &F, n: usize, triples: &[(usize, usize, usize, F::Elem)]) -> Result<Self> {
        let d = 2 * n;
        let mut gamma = vec![field.zero(); d * d * d];
        for (a, b, c, v) in triples {
            let (a, b, c) = (*a, *b, *c);
            if a >= d || b >= d || c >= d || a == b || b == c || a == c {
                return Err(Error::BadIndex(format!("({a}, {b}, {c}) for n = {n}")));
            }
            if field.is_zero(v) {
                return Err(Error::ZeroValue(format!("({a}, {b}, {c})")));
            }
            let neg = field.neg(v);
            for (p, odd) in [
                ([a, b, c], false),
                ([b, c, a], false),
                ([c, a, b], false),
                ([b, a, c], true),
                ([a, c, b], true),
                ([c, b, a], true),
            ] {
                gamma[(p[0] * d + p[1]) * d + p[2]] = if odd { neg.clone() } else { v.clone() };
            }
        }
        Ok(Self::from_tensor(field, n, gamma))
    }

    pub fn from_presentation(field: &F, p: &Presentation) -> Result<Self> {
        let t = p.typed(field)?;
        Self::from_triples(field, p.n, &t)
    }

    /// Wraps a raw tensor without checking antisymmetry (see `check_axioms`).
    pub fn from_tensor(field: &F, n: usize, gamma: Vec<F::Elem>) -> Self {
        let d = 2 * n;
        assert_eq!(gamma.len(), d * d * d, "tensor has wrong size");
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                // uv = sum_a (uv, y_a) x_a - (uv, x_a) y_a
                let mut v = zero_vec(field, d);
                for a in 0..n {
                    v[2 * a] = gamma[(i * d + j) * d + 2 * a + 1].clone();
                    v[2 * a + 1] = field.neg(&gamma[(i * d + j) * d + 2 * a]);
                }
                table.push(v);
            }
        }
        SAAlgebra { field: field.clone(), n, gamma, table }
    }

    /// The abelian algebra of dimension 2n.
    pub fn abelian(field: &F, n: usize) -> Self {
        Self::from_tensor(field, n, vec![field.zero(); 8 * n * n * n])
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        2 * self.n
    }
    pub fn form(&self) -> SymplecticForm {
        SymplecticForm::new(self.n)
    }
    pub fn tensor(&self) -> &[F::Elem] {
        &self.gamma
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &F::Elem {
        let d = self.dim();
        &self.gamma[(i * d + j) * d + k]
    }

    /// e_i e_j
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &Vector<F::Elem> {
        &self.table[i * self.dim() + j]
    }

    pub fn is_abelian(&self) -> bool {
        self.gamma.iter().all(|e| self.field.is_zero(e))
    }

    /// u v, without length checks.
    pub fn mul(&self, u: &[F::Elem], v: &[F::Elem]) -> Vector<F::Elem> {
        let f = &self.field;
        let d = self.dim();
        let mut out = zero_vec(f, d);
        for (i, ui) in u.iter().enumerate() {
            if f.is_zero(ui) {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if f.is_zero(vj) {
                    continue;
                }
                let c = f.mul(ui, vj);
                axpy(f, &mut out, &c, &self.table[i * d + j]);
            }
        }
        out
    }

    /// u e_j
    pub fn mul_basis(&self, u: &[F::Elem], j: usize) -> Vector<F::Elem> {
        let f = &self.field;
        let d = self.dim();
        let mut out = zero_vec(f, d);
        for (i, ui) in u.iter().enumerate() {
            axpy(f, &mut out, ui, &self.table[i * d + j]);
        }
        out
    }

    pub fn product(&self, u: &[F::Elem], v: &[F::Elem]) -> Result<Vector<F::Elem>> {
        let d = self.dim();
        if u.len() != d {
            return Err(Error::AmbientMismatch(d, u.len()));
        }
        if v.len() != d {
            return Err(Error::AmbientMismatch(d, v.len()));
        }
        Ok(self.mul(u, v))
    }

    /// (u, v) under the standard form.
    pub fn pair(&self, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        self.form().pair(&self.field, u, v)
    }

    /// (uv, w)
    pub fn triple(&self, u: &[F::Elem], v: &[F::Elem], w: &[F::Elem]) -> F::Elem {
        self.pair(&self.mul(u, v), w)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let f = &self.field;
        let d = self.dim();
        let mut alternating = true;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let g = self.gamma(i, j, k);
                    let repeated = i == j || j == k || i == k;
                    if (repeated && !f.is_zero(g))
                        || *g != f.neg(self.gamma(j, i, k))
                        || *g != f.neg(self.gamma(i, k, j))
                    {
                        alternating = false;
                    }
                }
            }
        }
        let e: Vec<Vector<F::Elem>> = (0..d).map(|i| unit_vec(f, d, i)).collect();
        let mut cyclic = true;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let a = self.pair(self.basis_product(i, j), &e[k]);
                    let b = self.pair(self.basis_product(j, k), &e[i]);
                    if a != b {
                        cyclic = false;
                    }
                }
            }
        }
        let mut self_adjoint = true;
        for u in 0..d {
            for v in 0..d {
                for x in 0..d {
                    let a = self.pair(self.basis_product(u, x), &e[v]);
                    let b = self.pair(&e[u], self.basis_product(v, x));
                    if a != b {
                        self_adjoint = false;
                    }
                }
            }
        }
        let nondegenerate = inverse(f, &self.form().matrix(f)).is_some();
        AxiomReport { alternating, cyclic, self_adjoint, nondegenerate }
    }

    /// The algebra re-read in a new basis: gamma'(i,j,k) = (b_i b_j, b_k).
    /// The basis should be a standard basis for the result to use the
    /// standard form again.
    pub fn change_basis(&self, basis: &[Vector<F::Elem>]) -> Self {
        let d = self.dim();
        let f = &self.field;
        let mut gamma = vec![f.zero(); d * d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let p = self.mul(&basis[i], &basis[j]);
                if is_zero_vec(f, &p) {
                    continue;
                }
                for k in 0..d {
                    let v = self.pair(&p, &basis[k]);
                    gamma[(j * d + i) * d + k] = f.neg(&v);
                    gamma[(i * d + j) * d + k] = v;
                }
            }
        }
        Self::from_tensor(f, self.n, gamma)
    }

    /// Nonzero structure constants on sorted triples.
    pub fn triples(&self) -> Vec<(usize, usize, usize, F::Elem)> {
        let d = self.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for b in (a + 1)..d {
                for c in (b + 1)..d {
                    let g = self.gamma(a, b, c);
                    if !self.field.is_zero(g) {
                        out.push((a, b, c, g.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn to_presentation(&self) -> Presentation {
        let raw = self
            .triples()
            .into_iter()
            .map(|(a, b, c, v)| (a, b, c, self.field.format_elem(&v)))
            .collect();
        Presentation::new(self.field.spec(), self.n, raw).expect("tensor triples are valid")
    }

    /// Value on an arbitrary (unsorted) triple of distinct indices.
    pub fn gamma_sorted(&self, a: usize, b: usize, c: usize) -> F::Elem {
        let ([a, b, c], odd) = sort_triple(a, b, c);
        let g = self.gamma(a, b, c).clone();
        if odd {
            self.field.neg(&g)
        } else {
            g
        }
    }

    // ----- subspace helpers -----

    pub fn zero_space(&self) -> Subspace<F::Elem> {
        Subspace::zero(self.dim())
    }

    pub fn full_space(&self) -> Subspace<F::Elem> {
        Subspace::full(&self.field, self.dim())
    }

    pub fn span(&self, vectors: Vec<Vector<F::Elem>>) -> Subspace<F::Elem> {
        Subspace::span_unchecked(&self.field, self.dim(), vectors)
    }

    /// span{a b : a in A, b in B}
    pub fn product_space(&self, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        let mut vecs = Vec::with_capacity(a.dim() * b.dim());
        if b.is_full() {
            for u in a.basis() {
                for j in 0..self.dim() {
                    vecs.push(self.mul_basis(u, j));
                }
            }
        } else {
            for u in a.basis() {
                for v in b.basis() {
                    vecs.push(self.mul(u, v));
                }
            }
        }
        self.span(vecs)
    }

    /// {x in A : x B subset of C}
    pub fn colon(
        &self,
        a: &Subspace<F::Elem>,
        b: &Subspace<F::Elem>,
        c: &Subspace<F::Elem>,
    ) -> Subspace<F::Elem> {
        let f = &self.field;
        let form = self.form();
        // w in C exactly when (w, z) = 0 for all z in perp(C)
        let cperp = form.perp(f, c).expect("same ambient");
        if cperp.is_zero() || a.is_zero() {
            return a.clone();
        }
        let prods: Vec<Vec<Vector<F::Elem>>> = a
            .basis()
            .iter()
            .map(|u| b.basis().iter().map(|v| self.mul(u, v)).collect())
            .collect();
        let mut rows = Vec::new();
        for bj in 0..b.dim() {
            for z in cperp.basis() {
                let row: Vector<F::Elem> = (0..a.dim()).map(|i| form.pair(f, &prods[i][bj], z)).collect();
                if !is_zero_vec(f, &row) {
                    rows.push(row);
                }
            }
        }
        let ker = crate::linalg::kernel(f, &rows, a.dim());
        let vecs = ker
            .iter()
            .map(|c| crate::linalg::combine(f, c, a.basis(), self.dim()))
            .collect();
        self.span(vecs)
    }

    pub fn perp(&self, s: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        self.form().perp(&self.field, s).expect("same ambient")
    }

    pub fn is_isotropic(&self, s: &Subspace<F::Elem>) -> bool {
        self.form().is_isotropic(&self.field, s)
    }

    pub fn meet(&self, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        a.meet(&self.field, b).expect("same ambient")
    }

    pub fn join(&self, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> Subspace<F::Elem> {
        a.join(&self.field, b).expect("same ambient")
    }

    pub fn le(&self, a: &Subspace<F::Elem>, b: &Subspace<F::Elem>) -> bool {
        b.contains_space(&self.field, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Gf};
    use crate::linalg::{vec_scale, xi, yi};

    fn n4(f: &Gf) -> SAAlgebra<Gf> {
        let p = Presentation::from_named(FieldSpec::Prime(3), 2, &[("x1", "y1", "y2", "1")]).unwrap();
        SAAlgebra::from_presentation(f, &p).unwrap()
    }

    #[test]
    fn dim4_products() {
        let f = Gf::prime(3).unwrap();
        let l = n4(&f);
        let e = |k| unit_vec(&f, 4, k);
        let neg = |v: Vector<u8>| vec_scale(&f, &2, &v);
        assert_eq!(l.mul(&e(xi(1)), &e(yi(1))), e(xi(2)));
        assert_eq!(l.mul(&e(yi(1)), &e(yi(2))), neg(e(yi(1))));
        assert_eq!(l.mul(&e(xi(1)), &e(yi(2))), neg(e(xi(1))));
        for (a, b) in [(xi(1), xi(2)), (xi(2), yi(1)), (xi(2), yi(2))] {
            assert!(is_zero_vec(&f, &l.mul(&e(a), &e(b))));
        }
        // y1 y2^k = (-1)^k y1
        let mut v = e(yi(1));
        for k in 1..=5 {
            v = l.mul(&v, &e(yi(2)));
            let expect = if k % 2 == 0 { e(yi(1)) } else { neg(e(yi(1))) };
            assert_eq!(v, expect);
        }
        assert!(l.check_axioms().all_pass());
    }

    #[test]
    fn p6_products() {
        let f = Gf::prime(3).unwrap();
        let p = Presentation::from_named(FieldSpec::Prime(3), 3, &[("y1", "y2", "y3", "1")]).unwrap();
        let l = SAAlgebra::from_presentation(&f, &p).unwrap();
        let e = |k| unit_vec(&f, 6, k);
        assert_eq!(l.mul(&e(yi(1)), &e(yi(2))), e(xi(3)));
        assert_eq!(l.mul(&e(yi(2)), &e(yi(3))), e(xi(1)));
        assert_eq!(l.mul(&e(yi(3)), &e(yi(1))), e(xi(2)));
        let nonzero = (0..6)
            .flat_map(|i| (0..6).map(move |j| (i, j)))
            .filter(|&(i, j)| !is_zero_vec(&f, l.basis_product(i, j)))
            .count();
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn broken_tensor_is_reported() {
        let f = Gf::prime(3).unwrap();
        let mut g = n4(&f).tensor().to_vec();
        g[(xi(1) * 4 + yi(1)) * 4 + yi(2)] = 0;
        let l = SAAlgebra::from_tensor(&f, 2, g);
        assert!(!l.check_axioms().alternating);
    }

    #[test]
    fn presentation_round_trip() {
        let f = Gf::prime(3).unwrap();
        let l = n4(&f);
        let again = SAAlgebra::from_presentation(&f, &l.to_presentation()).unwrap();
        assert_eq!(again, l);
    }
}
