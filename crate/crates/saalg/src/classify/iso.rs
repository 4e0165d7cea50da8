//! Isomorphism search between two algebras over the same finite field.
//!
//! For nilpotent algebras the search lifts an isomorphism through the
//! weight filtration W_1 = L, W_j = sum_{a+b=j} W_a W_b. A map is fixed by
//! the images of generators (a complement of W_2), every product of j
//! generators lies in W_j and W_a W_b <= W_(a+b), so the images of
//! generators modulo W_(k+1) pin down every product of j of them modulo
//! W_(k+j). Stage 1 enumerates generator images modulo W_2 with polynomial
//! pruning. Each later stage adds a correction in one layer W_k / W_(k+1),
//! and the product and form conditions that become decidable at that stage
//! are affine in the correction, so they are solved exactly and only the
//! free part of the solution space is branched on. Generators are
//! additionally constrained by a family of characteristic subspaces.
//!
//! Non-nilpotent algebras fall back to a basis-vector by basis-vector
//! search with form and triple propagation.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{inverse, is_zero_vec, rref, zero_vec, Matrix, Subspace, Vector};
use crate::saa_core::SAAlgebra;

use super::charsub::{characteristic_family, CharFamily};

/// A symplectic change of basis carrying one algebra onto another:
/// column m is the image of the m-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness<E> {
    pub matrix: Matrix<E>,
}

impl<E: Clone> IsoWitness<E> {
    pub fn image(&self, m: usize) -> Vector<E> {
        self.matrix.iter().map(|row| row[m].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<E> {
    Isomorphic(IsoWitness<E>),
    /// The whole search space was explored.
    NotIsomorphic,
    /// The node budget ran out first.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct IsoReport<E> {
    pub verdict: Verdict<E>,
    /// Search nodes visited (partial maps).
    pub nodes: u64,
    /// Complete maps reached and verified.
    pub leaves: u64,
    /// Whether the decision was made before any search, by comparing
    /// invariants.
    pub by_invariants: bool,
}

impl<E> IsoReport<E> {
    pub fn witness(&self) -> Option<&IsoWitness<E>> {
        match &self.verdict {
            Verdict::Isomorphic(w) => Some(w),
            _ => None,
        }
    }
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.verdict, Verdict::Isomorphic(_))
    }
    pub fn is_exhaustive_none(&self) -> bool {
        matches!(self.verdict, Verdict::NotIsomorphic)
    }
}

/// Checks M^T J M = J and (Mu Mv, Mw)_K = (uv, w)_L on all basis triples.
pub fn verify_witness<F: Field>(l: &SAAlgebra<F>, k: &SAAlgebra<F>, w: &IsoWitness<F::Elem>) -> bool {
    let d = l.dim();
    if k.dim() != d || w.matrix.len() != d || w.matrix.iter().any(|r| r.len() != d) {
        return false;
    }
    let cols: Vec<Vector<F::Elem>> = (0..d).map(|m| w.image(m)).collect();
    let form = l.form();
    let f = l.field();
    for i in 0..d {
        for j in 0..d {
            let e = if j == i + 1 && i % 2 == 0 {
                f.one()
            } else if i == j + 1 && j % 2 == 0 {
                f.neg(&f.one())
            } else {
                f.zero()
            };
            if form.pair(f, &cols[i], &cols[j]) != e {
                return false;
            }
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let p = k.mul(&cols[i], &cols[j]);
            for m in (j + 1)..d {
                if k.pair(&p, &cols[m]) != *l.gamma(i, j, m) {
                    return false;
                }
            }
        }
    }
    true
}

/// Decides whether L and K are isomorphic. `budget` bounds the number of
/// search nodes; `None` means unbounded.
pub fn is_isomorphic<F: Field>(
    l: &SAAlgebra<F>,
    k: &SAAlgebra<F>,
    budget: Option<u64>,
) -> Result<IsoReport<F::Elem>> {
    if l.field().spec() != k.field().spec() {
        return Err(Error::FieldMismatch);
    }
    if l.dim() != k.dim() {
        return Err(Error::DimMismatch);
    }
    if l.field().order().is_none() {
        return Err(Error::UnsupportedField);
    }
    let none = |by_invariants| IsoReport { verdict: Verdict::NotIsomorphic, nodes: 0, leaves: 0, by_invariants };
    let (sl, sk) = (l.central_series(), k.central_series());
    if sl.lower_dims() != sk.lower_dims() || sl.upper_dims() != sk.upper_dims() {
        return Ok(none(true));
    }
    if l.is_abelian() {
        // both abelian: any symplectic basis change, the identity
        return Ok(IsoReport {
            verdict: Verdict::Isomorphic(IsoWitness { matrix: crate::linalg::identity(l.field(), l.dim()) }),
            nodes: 0,
            leaves: 1,
            by_invariants: false,
        });
    }
    if !sl.is_nilpotent() {
        return Ok(fallback_search(l, k, budget));
    }
    let (wl, wk) = (weight_filtration(l), weight_filtration(k));
    let dims = |w: &[Subspace<F::Elem>]| w.iter().map(|s| s.dim()).collect::<Vec<_>>();
    if dims(&wl) != dims(&wk) {
        return Ok(none(true));
    }
    let (cl, ck) = (characteristic_family(l), characteristic_family(k));
    if cl.signature != ck.signature {
        return Ok(none(true));
    }
    let mut search = Lift::new(l, k, &wl, &wk, &cl, &ck, budget);
    let found = search.run();
    let verdict = match found {
        Some(m) => {
            let w = IsoWitness { matrix: m };
            assert!(verify_witness(l, k, &w), "lifted map failed verification");
            Verdict::Isomorphic(w)
        }
        None if search.truncated => Verdict::Unknown,
        None => Verdict::NotIsomorphic,
    };
    Ok(IsoReport { verdict, nodes: search.nodes, leaves: search.leaves, by_invariants: false })
}

/// W_1 = L, W_j = sum_{a+b=j} W_a W_b, ending with the first zero term.
/// Only meaningful for nilpotent algebras.
pub fn weight_filtration<F: Field>(l: &SAAlgebra<F>) -> Vec<Subspace<F::Elem>> {
    let mut w = vec![l.zero_space(), l.full_space()];
    let mut j = 2;
    while !w[j - 1].is_zero() {
        let mut acc = l.zero_space();
        for a in 1..=j / 2 {
            acc = l.join(&acc, &l.product_space(&w[a], &w[j - a]));
        }
        w.push(acc);
        j += 1;
        assert!(j <= 8 * l.dim() + 4, "weight filtration did not terminate");
    }
    // w[0] is a placeholder so that w[j] = W_j
    w
}

enum Word {
    Gen,
    Prod(usize, usize),
}

struct Lift<'a, F: Field> {
    f: &'a F,
    elems: Vec<F::Elem>,
    d: usize,
    r: usize,
    /// generators rc..r are central; their images are fixed last, by
    /// linear algebra inside Z(K)
    rc: usize,
    /// Z(K) in adapted coordinates
    kz: Subspace<F::Elem>,
    /// N with W_N = 0
    top: usize,
    // source side
    words: Vec<Word>,
    wlen: Vec<usize>,
    deps: Vec<u64>,
    word_vecs: Vec<Vector<F::Elem>>,
    /// coordinates of w_a w_b in the word basis
    lprod: Vec<Vector<F::Elem>>,
    lgram: Vec<F::Elem>,
    // target side, in a basis adapted to its filtration
    kbasis: Vec<Vector<F::Elem>>,
    layer_range: Vec<(usize, usize)>,
    ktab: Vec<Vector<F::Elem>>,
    kgram: Vec<F::Elem>,
    /// pairs (a, b), a < b, whose product is not itself a basis word
    pairs: Vec<(usize, usize)>,
    /// stage-1 checks grouped by the last generator they need
    stage1_checks: Vec<Vec<(usize, usize)>>,
    /// generator g lies in char subspace t of L (mod W_2), and the images
    /// of the corresponding subspaces of K, in layer-1 coordinates
    gen_in: Vec<Vec<usize>>,
    lchar: Vec<Subspace<F::Elem>>,
    kchar: Vec<Subspace<F::Elem>>,
    /// dim of (g L + W_3) / W_3 for each generator g, and of (S L + W_3) / W_3
    /// for the span S of generators 0..=g
    rank_single: Vec<usize>,
    rank_prefix: Vec<usize>,
    /// layer-2 parts of the products of assigned generator images with
    /// the layer-1 basis of K
    prod_rows: Vec<Vec<Vector<F::Elem>>>,
    // state
    img: Vec<Vector<F::Elem>>,
    nodes: u64,
    leaves: u64,
    budget: Option<u64>,
    truncated: bool,
}

impl<'a, F: Field> Lift<'a, F> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        l: &'a SAAlgebra<F>,
        k: &SAAlgebra<F>,
        wl: &[Subspace<F::Elem>],
        wk: &[Subspace<F::Elem>],
        cl: &CharFamily<F::Elem>,
        ck: &CharFamily<F::Elem>,
        budget: Option<u64>,
    ) -> Self {
        let f = l.field();
        let d = l.dim();
        let top = wl.len() - 1;

        // target basis adapted to W'_1 > W'_2 > ...
        let mut kbasis = Vec::with_capacity(d);
        let mut layer_range = vec![(0, 0); top + 1];
        for j in 1..top {
            let start = kbasis.len();
            for v in wk[j].complement_in(f, &wk[j + 1]) {
                kbasis.push(v);
            }
            layer_range[j] = (start, kbasis.len());
        }
        layer_range[top] = (d, d);
        let kinv = inverse(f, &columns(f, &kbasis)).expect("adapted basis");
        let kcoords = |v: &[F::Elem]| crate::linalg::mat_vec(f, &kinv, v);
        let mut ktab = Vec::with_capacity(d * d);
        let mut kgram = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                ktab.push(kcoords(&k.mul(&kbasis[a], &kbasis[b])));
                kgram.push(k.pair(&kbasis[a], &kbasis[b]));
            }
        }

        // source generators adapted to the characteristic family modulo W_2,
        // smallest subspaces first
        let w2 = &wl[2];
        let zl = l.center_rank().center;
        let (gens, rc) = adapted_generators(f, w2, &zl, &cl.members);
        let r = gens.len();
        assert!(r <= 64, "too many generators");
        let mut words: Vec<Word> = (0..r).map(|_| Word::Gen).collect();
        let mut wlen = vec![1; r];
        let mut deps: Vec<u64> = (0..r).map(|i| 1u64 << i).collect();
        let mut word_vecs = gens.clone();
        for j in 2..top {
            let mut acc = wl[j + 1].clone();
            for a in 0..words.len() {
                for b in (a + 1)..words.len() {
                    if wlen[a] + wlen[b] != j {
                        continue;
                    }
                    let p = l.mul(&word_vecs[a], &word_vecs[b]);
                    if !acc.contains(f, &p) {
                        acc = acc.extend(f, std::slice::from_ref(&p));
                        words.push(Word::Prod(a, b));
                        wlen.push(j);
                        deps.push(deps[a] | deps[b]);
                        word_vecs.push(p);
                    }
                }
            }
            assert_eq!(acc, wl[j], "words do not span layer {j}");
        }
        assert_eq!(words.len(), d, "word basis incomplete");
        let linv = inverse(f, &columns(f, &word_vecs)).expect("word basis");
        let mut lprod = Vec::with_capacity(d * d);
        let mut lgram = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                lprod.push(crate::linalg::mat_vec(f, &linv, &l.mul(&word_vecs[a], &word_vecs[b])));
                lgram.push(l.pair(&word_vecs[a], &word_vecs[b]));
            }
        }
        let is_word = |a: usize, b: usize| {
            words.iter().any(|w| matches!(w, Word::Prod(x, y) if (*x, *y) == (a, b)))
        };
        let mut pairs = Vec::new();
        for a in 0..d {
            for b in (a + 1)..d {
                if !is_word(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        // stage-1 checks: products modulo W'_(1+la+lb), and exact form
        // values when 1 + la + lb >= N + 1
        let mut stage1_checks = vec![Vec::new(); r];
        for a in 0..d {
            for b in (a + 1)..d {
                let mut dep = deps[a] | deps[b];
                for c in 0..d {
                    if !f.is_zero(&lprod[a * d + b][c]) {
                        dep |= deps[c];
                    }
                }
                let last = 63 - dep.leading_zeros() as usize;
                if last >= rc {
                    continue;
                }
                let product_check = !is_word(a, b) && wlen[a] + wlen[b] < top;
                let form_check = 1 + wlen[a] + wlen[b] > top;
                if product_check || form_check {
                    stage1_checks[last].push((a, b));
                }
            }
        }

        // characteristic subspaces modulo W_2 in layer-1 coordinates
        let to_l1 = |s: &Subspace<F::Elem>, coords: &dyn Fn(&[F::Elem]) -> Vec<F::Elem>| {
            let vecs: Vec<Vector<F::Elem>> = s.basis().iter().map(|v| coords(v)[..r].to_vec()).collect();
            Subspace::span_unchecked(f, r, vecs)
        };
        let lcoords = |v: &[F::Elem]| crate::linalg::mat_vec(f, &linv, v);
        let lchar: Vec<Subspace<F::Elem>> = cl.members.iter().map(|s| to_l1(s, &lcoords)).collect();
        let kchar: Vec<Subspace<F::Elem>> = ck.members.iter().map(|s| to_l1(s, &kcoords)).collect();
        let gen_in: Vec<Vec<usize>> = (0..r)
            .map(|g| {
                let e = crate::linalg::unit_vec(f, r, g);
                (0..lchar.len()).filter(|&t| lchar[t].contains(f, &e)).collect()
            })
            .collect();

        // products of generators with generators, layer-2 word coordinates
        let l2: Vec<usize> = (0..d).filter(|&w| wlen[w] == 2).collect();
        let gen_rows = |a: usize| -> Vec<Vector<F::Elem>> {
            (0..r).map(|b| l2.iter().map(|&c| lprod[a * d + b][c].clone()).collect()).collect()
        };
        let mut rank_single = Vec::with_capacity(r);
        let mut rank_prefix = Vec::with_capacity(r);
        let mut acc: Vec<Vector<F::Elem>> = Vec::new();
        for a in 0..r {
            let rows = gen_rows(a);
            rank_single.push(crate::linalg::rank(f, &rows, l2.len()));
            acc.extend(rows);
            rank_prefix.push(crate::linalg::rank(f, &acc, l2.len()));
        }

        let zk = k.center_rank().center;
        let kz = Subspace::span_unchecked(f, d, zk.basis().iter().map(|v| kcoords(v)).collect());

        Lift {
            f,
            elems: f.elements().expect("finite field"),
            d,
            r,
            rc,
            kz,
            top,
            words,
            wlen,
            deps,
            word_vecs,
            lprod,
            lgram,
            kbasis,
            layer_range,
            ktab,
            kgram,
            pairs,
            stage1_checks,
            gen_in,
            lchar,
            kchar,
            rank_single,
            rank_prefix,
            prod_rows: vec![Vec::new(); r],
            img: vec![zero_vec(f, d); d],
            nodes: 0,
            leaves: 0,
            budget,
            truncated: false,
        }
    }

    fn kmul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F::Elem> {
        let f = self.f;
        let d = self.d;
        let mut out = zero_vec(f, d);
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let c = f.mul(ai, bj);
                crate::linalg::axpy(f, &mut out, &c, &self.ktab[i * d + j]);
            }
        }
        out
    }

    fn kpair(&self, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
        let f = self.f;
        let d = self.d;
        let mut acc = f.zero();
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let g = &self.kgram[i * d + j];
                if f.is_zero(bj) || f.is_zero(g) {
                    continue;
                }
                acc = f.add(&acc, &f.mul(&f.mul(ai, bj), g));
            }
        }
        acc
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.truncated = true;
                return false;
            }
        }
        true
    }

    fn recompute_words(&mut self, from: usize) {
        for w in from..self.d {
            if let Word::Prod(a, b) = self.words[w] {
                self.img[w] = self.kmul(&self.img[a], &self.img[b]);
            }
        }
    }

    /// Residual Phi(a)Phi(b) - Phi(ab) of a word pair.
    fn residual(&self, a: usize, b: usize) -> Vector<F::Elem> {
        let f = self.f;
        let mut r = self.kmul(&self.img[a], &self.img[b]);
        let coeffs = &self.lprod[a * self.d + b];
        for (c, x) in coeffs.iter().enumerate() {
            if !f.is_zero(x) {
                let m = f.neg(x);
                crate::linalg::axpy(f, &mut r, &m, &self.img[c]);
            }
        }
        r
    }

    fn run(&mut self) -> Option<Matrix<F::Elem>> {
        self.stage1(0)
    }

    fn stage1(&mut self, g: usize) -> Option<Matrix<F::Elem>> {
        if g == self.rc {
            return self.lift(2);
        }
        let f = self.f;
        let r = self.r;
        // allowed directions: the meet of the K-images of the characteristic
        // subspaces containing this generator
        let mut allowed = Subspace::full(f, r);
        for &t in &self.gen_in[g] {
            allowed = allowed.meet(f, &self.kchar[t]).expect("same ambient");
        }
        let assigned: Vec<Vector<F::Elem>> = (0..g).map(|i| self.img[i][..r].to_vec()).collect();
        let span = Subspace::span_unchecked(f, r, assigned.clone());
        let basis = allowed.basis().to_vec();
        let total = (self.elems.len() as u64).pow(basis.len() as u32);
        for idx in 0..total {
            let mut coeffs = Vec::with_capacity(basis.len());
            let mut x = idx;
            for _ in 0..basis.len() {
                coeffs.push(self.elems[(x % self.elems.len() as u64) as usize].clone());
                x /= self.elems.len() as u64;
            }
            let v = crate::linalg::combine(f, &coeffs, &basis, r);
            if span.contains(f, &v) {
                continue;
            }
            if !self.char_dims_ok(g, &v, &assigned) {
                continue;
            }
            let Some(rows) = self.rank_ok(g, &v) else { continue };
            if !self.tick() {
                return None;
            }
            let mut full = zero_vec(f, self.d);
            full[..r].clone_from_slice(&v);
            self.img[g] = full;
            self.prod_rows[g] = rows;
            self.recompute_words(self.r);
            if self.stage1_ok(g) {
                if let Some(m) = self.stage1(g + 1) {
                    return Some(m);
                }
                if self.truncated {
                    return None;
                }
            }
        }
        self.img[g] = zero_vec(f, self.d);
        None
    }

    /// Checks the ranks of v L and of (span of images so far + v) L modulo
    /// W'_3; returns the product rows of v on success.
    fn rank_ok(&self, g: usize, v: &[F::Elem]) -> Option<Vec<Vector<F::Elem>>> {
        let f = self.f;
        let (s1, e1) = self.layer_range[1];
        let (s2, e2) = self.layer_range[2];
        let mut full = zero_vec(f, self.d);
        full[..self.r].clone_from_slice(v);
        let mut unit = zero_vec(f, self.d);
        let rows: Vec<Vector<F::Elem>> = (s1..e1)
            .map(|b| {
                unit[b] = f.one();
                let p = self.kmul(&full, &unit);
                unit[b] = f.zero();
                p[s2..e2].to_vec()
            })
            .collect();
        if crate::linalg::rank(f, &rows, e2 - s2) != self.rank_single[g] {
            return None;
        }
        let mut all: Vec<Vector<F::Elem>> = self.prod_rows[..g].concat();
        all.extend(rows.iter().cloned());
        if crate::linalg::rank(f, &all, e2 - s2) != self.rank_prefix[g] {
            return None;
        }
        Some(rows)
    }

    /// dim(span(g_0..g_i) meet S_t) must agree on both sides for every t.
    fn char_dims_ok(&self, g: usize, v: &[F::Elem], assigned: &[Vector<F::Elem>]) -> bool {
        let f = self.f;
        let r = self.r;
        let src = Subspace::coordinate(f, r, &(0..=g).collect::<Vec<_>>());
        let mut imgs = assigned.to_vec();
        imgs.push(v.to_vec());
        let dst = Subspace::span_unchecked(f, r, imgs);
        for t in 0..self.lchar.len() {
            let a = src.meet(f, &self.lchar[t]).expect("same ambient").dim();
            let b = dst.meet(f, &self.kchar[t]).expect("same ambient").dim();
            if a != b {
                return false;
            }
        }
        true
    }

    fn stage1_ok(&self, g: usize) -> bool {
        let f = self.f;
        for &(a, b) in &self.stage1_checks[g] {
            let (la, lb) = (self.wlen[a], self.wlen[b]);
            if 1 + la + lb > self.top && self.kpair(&self.img[a], &self.img[b]) != self.lgram[a * self.d + b] {
                return false;
            }
            if la + lb < self.top {
                let res = self.residual(a, b);
                let (s, e) = self.layer_range[la + lb];
                if res[s..e].iter().any(|x| !f.is_zero(x)) {
                    return false;
                }
            }
        }
        true
    }

    /// Stage k: corrections of the generator images in layer k.
    fn lift(&mut self, k: usize) -> Option<Matrix<F::Elem>> {
        if k >= self.top {
            return self.central(self.rc);
        }
        let f = self.f;
        let d = self.d;
        let (ls, le) = self.layer_range[k];
        let m = le - ls;
        let nv = self.rc * m;
        // derivative images dimg[v][w]
        let mut dimg: Vec<Vec<Option<Vector<F::Elem>>>> = vec![vec![None; d]; nv];
        for (v, dv) in dimg.iter_mut().enumerate() {
            let (g, s) = (v / m.max(1), ls + v % m.max(1));
            for w in 0..d {
                if self.deps[w] & (1u64 << g) == 0 {
                    continue;
                }
                dv[w] = match self.words[w] {
                    Word::Gen => Some(crate::linalg::unit_vec(f, d, s)),
                    Word::Prod(a, b) => {
                        let mut acc = zero_vec(f, d);
                        if let Some(da) = &dv[a] {
                            let p = self.kmul(da, &self.img[b]);
                            acc = crate::linalg::vec_add(f, &acc, &p);
                        }
                        if let Some(db) = &dv[b] {
                            let p = self.kmul(&self.img[a], db);
                            acc = crate::linalg::vec_add(f, &acc, &p);
                        }
                        Some(acc)
                    }
                };
            }
        }
        let zero = zero_vec(f, d);
        let dget = |v: usize, w: usize| -> &Vector<F::Elem> { dimg[v][w].as_ref().unwrap_or(&zero) };
        // augmented rows [coefficients | rhs]
        let mut rows: Vec<Vector<F::Elem>> = Vec::new();
        let central = |w: usize| (self.rc..self.r).contains(&w);
        for &(a, b) in &self.pairs {
            if central(a) || central(b) {
                continue;
            }
            let (la, lb) = (self.wlen[a], self.wlen[b]);
            let layer = k + la + lb - 1;
            if layer >= self.top {
                continue;
            }
            let (s0, s1) = self.layer_range[layer];
            if s0 == s1 {
                continue;
            }
            let res = self.residual(a, b);
            let coeffs = &self.lprod[a * d + b];
            let mut lin: Vec<Vector<F::Elem>> = Vec::with_capacity(nv);
            for v in 0..nv {
                let mut t = zero_vec(f, d);
                if dimg[v][a].is_some() {
                    t = crate::linalg::vec_add(f, &t, &self.kmul(dget(v, a), &self.img[b]));
                }
                if dimg[v][b].is_some() {
                    t = crate::linalg::vec_add(f, &t, &self.kmul(&self.img[a], dget(v, b)));
                }
                for (c, x) in coeffs.iter().enumerate() {
                    if !f.is_zero(x) && dimg[v][c].is_some() {
                        let mx = f.neg(x);
                        crate::linalg::axpy(f, &mut t, &mx, dget(v, c));
                    }
                }
                lin.push(t);
            }
            for s in s0..s1 {
                let mut row: Vector<F::Elem> = lin.iter().map(|t| t[s].clone()).collect();
                row.push(f.neg(&res[s]));
                if !is_zero_vec(f, &row) {
                    rows.push(row);
                }
            }
        }
        for a in 0..d {
            for b in (a + 1)..d {
                if k + self.wlen[a] + self.wlen[b] != self.top + 1 || central(a) || central(b) {
                    continue;
                }
                let mut row: Vector<F::Elem> = (0..nv)
                    .map(|v| {
                        let x = if dimg[v][a].is_some() { self.kpair(dget(v, a), &self.img[b]) } else { f.zero() };
                        let y = if dimg[v][b].is_some() { self.kpair(&self.img[a], dget(v, b)) } else { f.zero() };
                        f.add(&x, &y)
                    })
                    .collect();
                let cur = self.kpair(&self.img[a], &self.img[b]);
                row.push(f.sub(&self.lgram[a * d + b], &cur));
                if !is_zero_vec(f, &row) {
                    rows.push(row);
                }
            }
        }
        drop(dimg);
        let pivots = rref(f, &mut rows, nv + 1);
        if pivots.last() == Some(&nv) {
            return None;
        }
        let mut particular = zero_vec(f, nv);
        for (i, &c) in pivots.iter().enumerate() {
            particular[c] = rows[i][nv].clone();
        }
        let mut free = Vec::new();
        let mut is_piv = vec![false; nv];
        for &c in &pivots {
            is_piv[c] = true;
        }
        for c in 0..nv {
            if is_piv[c] {
                continue;
            }
            let mut v = zero_vec(f, nv);
            v[c] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&rows[i][c]);
            }
            free.push(v);
        }
        let saved: Vec<Vector<F::Elem>> = self.img.clone();
        let q = self.elems.len() as u64;
        let total = q.checked_pow(free.len() as u32).unwrap_or(u64::MAX);
        for idx in 0..total {
            if !self.tick() {
                self.img = saved;
                return None;
            }
            let mut t = particular.clone();
            let mut x = idx;
            for kv in &free {
                let c = &self.elems[(x % q) as usize];
                x /= q;
                crate::linalg::axpy(f, &mut t, c, kv);
            }
            for g in 0..self.rc {
                for j in 0..m {
                    let c = &t[g * m + j];
                    if !f.is_zero(c) {
                        self.img[g][ls + j] = f.add(&self.img[g][ls + j], c);
                    }
                }
            }
            self.recompute_words(self.r);
            if let Some(mat) = self.lift(k + 1) {
                return Some(mat);
            }
            self.img.clone_from(&saved);
            if self.truncated {
                return None;
            }
        }
        None
    }

    /// Images of the central generators from `g` on: vectors of Z(K) with
    /// prescribed pairings against every other word, branching only over
    /// the solutions of these linear conditions.
    fn central(&mut self, g: usize) -> Option<Matrix<F::Elem>> {
        if g == self.r {
            self.leaves += 1;
            return Some(self.witness_matrix());
        }
        let f = self.f;
        let d = self.d;
        let zb = self.kz.basis().to_vec();
        let p = zb.len();
        let mut rows: Vec<Vector<F::Elem>> = Vec::new();
        for w in (0..d).filter(|&w| w < self.rc || w >= self.r || w < g) {
            let mut row: Vector<F::Elem> = zb.iter().map(|z| self.kpair(z, &self.img[w])).collect();
            row.push(self.lgram[g * d + w].clone());
            if !is_zero_vec(f, &row) {
                rows.push(row);
            }
        }
        let pivots = rref(f, &mut rows, p + 1);
        if pivots.last() == Some(&p) {
            return None;
        }
        let mut part = zero_vec(f, p);
        for (i, &c) in pivots.iter().enumerate() {
            part[c] = rows[i][p].clone();
        }
        let ker = crate::linalg::kernel(f, &rows.iter().map(|r| r[..p].to_vec()).collect(), p);
        let q = self.elems.len() as u64;
        let total = q.checked_pow(ker.len() as u32).unwrap_or(u64::MAX);
        for idx in 0..total {
            if !self.tick() {
                return None;
            }
            let mut t = part.clone();
            let mut x = idx;
            for kv in &ker {
                let c = self.elems[(x % q) as usize].clone();
                x /= q;
                crate::linalg::axpy(f, &mut t, &c, kv);
            }
            self.img[g] = crate::linalg::combine(f, &t, &zb, d);
            if let Some(m) = self.central(g + 1) {
                return Some(m);
            }
            if self.truncated {
                return None;
            }
        }
        None
    }

    /// M with M w_a = Phi(w_a), in standard coordinates on both sides.
    fn witness_matrix(&self) -> Matrix<F::Elem> {
        let f = self.f;
        let d = self.d;
        // images in standard coordinates, as columns
        let img_std: Vec<Vector<F::Elem>> = self
            .img
            .iter()
            .map(|c| crate::linalg::combine(f, c, &self.kbasis, d))
            .collect();
        let wl = columns(f, &self.word_vecs);
        let wlinv = inverse(f, &wl).expect("word basis");
        let img_cols = columns(f, &img_std);
        crate::linalg::mat_mul(f, &img_cols, &wlinv, d)
    }
}

/// The matrix whose columns are `vecs`.
fn columns<F: Field>(_f: &F, vecs: &[Vector<F::Elem>]) -> Matrix<F::Elem> {
    let d = vecs.first().map_or(0, |v| v.len());
    (0..d).map(|i| vecs.iter().map(|v| v[i].clone()).collect()).collect()
}

/// A complement of W_2: vectors adapted to the (S + W_2) for S in the
/// family, taken smallest first, followed by vectors of Z(L) completing
/// Z(L) + W_2. Returns the vectors and the number of non-central ones.
fn adapted_generators<F: Field>(
    f: &F,
    w2: &Subspace<F::Elem>,
    center: &Subspace<F::Elem>,
    family: &[Subspace<F::Elem>],
) -> (Vec<Vector<F::Elem>>, usize) {
    let d = w2.ambient();
    let mut sums: Vec<Subspace<F::Elem>> = family
        .iter()
        .map(|s| s.join(f, w2).expect("same ambient"))
        .collect();
    sums.push(Subspace::full(f, d));
    sums.sort_by_key(|s| s.dim());
    let central = center.complement_in(f, &center.meet(f, w2).expect("same ambient"));
    let mut acc = w2.extend(f, &central);
    let mut gens = Vec::new();
    for s in &sums {
        for v in s.complement_in(f, &acc) {
            acc = acc.extend(f, std::slice::from_ref(&v));
            gens.push(v);
        }
    }
    let rc = gens.len();
    gens.extend(central);
    (gens, rc)
}

/// Basis-vector by basis-vector search for algebras that are not nilpotent.
fn fallback_search<F: Field>(l: &SAAlgebra<F>, k: &SAAlgebra<F>, budget: Option<u64>) -> IsoReport<F::Elem> {
    struct St<'a, F: Field> {
        l: &'a SAAlgebra<F>,
        k: &'a SAAlgebra<F>,
        elems: Vec<F::Elem>,
        img: Vec<Vector<F::Elem>>,
        nodes: u64,
        leaves: u64,
        budget: Option<u64>,
        truncated: bool,
    }
    fn go<F: Field>(st: &mut St<'_, F>, m: usize) -> bool {
        let f = st.l.field();
        let d = st.l.dim();
        if m == d {
            st.leaves += 1;
            return true;
        }
        let e: Vec<Vector<F::Elem>> = (0..d).map(|i| crate::linalg::unit_vec(f, d, i)).collect();
        let form = st.l.form();
        let mut rows: Vec<Vector<F::Elem>> = Vec::new();
        for i in 0..m {
            let mut row = form.covector(f, &st.img[i]);
            row.push(form.pair(f, &e[i], &e[m]));
            rows.push(row);
            for j in (i + 1)..m {
                let p = st.k.mul(&st.img[i], &st.img[j]);
                let mut row = form.covector(f, &p);
                row.push(st.l.gamma(i, j, m).clone());
                rows.push(row);
            }
        }
        let pivots = rref(f, &mut rows, d + 1);
        if pivots.last() == Some(&d) {
            return false;
        }
        let mut part = zero_vec(f, d);
        for (i, &c) in pivots.iter().enumerate() {
            part[c] = rows[i][d].clone();
        }
        let ker = crate::linalg::kernel(f, &rows.iter().map(|r| r[..d].to_vec()).collect(), d);
        let prev = Subspace::span_unchecked(f, d, st.img[..m].to_vec());
        let q = st.elems.len() as u64;
        let total = q.checked_pow(ker.len() as u32).unwrap_or(u64::MAX);
        for idx in 0..total {
            st.nodes += 1;
            if st.budget.is_some_and(|b| st.nodes > b) {
                st.truncated = true;
                return false;
            }
            let mut v = part.clone();
            let mut x = idx;
            for kv in &ker {
                let c = st.elems[(x % q) as usize].clone();
                x /= q;
                crate::linalg::axpy(f, &mut v, &c, kv);
            }
            if prev.contains(f, &v) {
                continue;
            }
            st.img[m] = v;
            if go(st, m + 1) {
                return true;
            }
            if st.truncated {
                return false;
            }
        }
        false
    }
    let f = l.field();
    let d = l.dim();
    let mut st = St {
        l,
        k,
        elems: f.elements().expect("finite field"),
        img: vec![zero_vec(f, d); d],
        nodes: 0,
        leaves: 0,
        budget,
        truncated: false,
    };
    let found = go(&mut st, 0);
    let verdict = if found {
        let matrix = columns(f, &st.img);
        let w = IsoWitness { matrix };
        assert!(verify_witness(l, k, &w), "fallback map failed verification");
        Verdict::Isomorphic(w)
    } else if st.truncated {
        Verdict::Unknown
    } else {
        Verdict::NotIsomorphic
    };
    IsoReport { verdict, nodes: st.nodes, leaves: st.leaves, by_invariants: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, entry, EntryKind};
    use crate::field::{FieldSpec, Gf};
    use crate::linalg::random_symplectic_basis;
    use rand::SeedableRng;

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    fn inverse_witness(f: &Gf, w: &IsoWitness<u8>) -> IsoWitness<u8> {
        IsoWitness { matrix: inverse(f, &w.matrix).expect("witness is invertible") }
    }

    #[test]
    fn reflexive_and_scaling_map() {
        let f = gf(7);
        let e = entry("P8(2,3)").unwrap();
        let l = e.instantiate(&f, &[1]).unwrap();
        let r = is_isomorphic(&l, &l, None).unwrap();
        assert!(verify_witness(&l, &l, r.witness().unwrap()));
        // 6 = 3^3 * 1 in GF(7)
        let k = e.instantiate(&f, &[6]).unwrap();
        let r = is_isomorphic(&l, &k, None).unwrap();
        let w = r.witness().unwrap();
        assert!(verify_witness(&l, &k, w));
        assert!(verify_witness(&k, &l, &inverse_witness(&f, w)));
        let r = is_isomorphic(&l, &e.instantiate(&f, &[2]).unwrap(), None).unwrap();
        assert!(r.is_exhaustive_none() && r.leaves == 0);
    }

    #[test]
    fn invariants_separate_p31_p32() {
        let f = gf(3);
        let a = entry("P10(3,1)").unwrap().instantiate(&f, &[]).unwrap();
        let b = entry("P10(3,2)").unwrap().instantiate(&f, &[]).unwrap();
        let r = is_isomorphic(&a, &b, None).unwrap();
        assert!(r.is_exhaustive_none() && r.by_invariants);
    }

    #[test]
    fn errors() {
        let (f3, f5) = (gf(3), gf(5));
        let a = SAAlgebra::abelian(&f3, 2);
        assert!(matches!(is_isomorphic(&a, &SAAlgebra::abelian(&f5, 2), None), Err(Error::FieldMismatch)));
        assert!(matches!(is_isomorphic(&a, &SAAlgebra::abelian(&f3, 3), None), Err(Error::DimMismatch)));
    }

    #[test]
    fn basis_change_is_found_both_ways() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [3, 4] {
            let f = gf(q);
            for e in catalog().iter().filter(|e| e.kind != EntryKind::Fixture && e.dim() >= 6) {
                let Some(p) = e.family_members(&f).unwrap().into_iter().next() else { continue };
                let l = e.instantiate(&f, &p).unwrap();
                let k = l.change_basis(&random_symplectic_basis(&f, l.n(), 15, &mut rng));
                let r = is_isomorphic(&l, &k, None).unwrap();
                let w = r.witness().unwrap_or_else(|| panic!("{} over GF({q})", e.label));
                assert!(verify_witness(&l, &k, w));
                assert!(verify_witness(&k, &l, &inverse_witness(&f, w)));
            }
        }
    }

    #[test]
    fn agrees_with_parameter_equivalence() {
        for q in [3, 4, 5] {
            let f = gf(q);
            for e in catalog().iter().filter(|e| !e.params.is_empty() && e.kind == EntryKind::Census) {
                let ps: Vec<_> = e.valid_params(&f).unwrap().into_iter().take(5).collect();
                for (i, a) in ps.iter().enumerate() {
                    let l = e.instantiate(&f, a).unwrap();
                    for b in &ps[i..] {
                        let k = e.instantiate(&f, b).unwrap();
                        let r = is_isomorphic(&l, &k, None).unwrap();
                        let eq = e.equivalent(&f, a, b).unwrap();
                        assert!(!matches!(r.verdict, Verdict::Unknown));
                        assert_eq!(r.is_isomorphic(), eq, "{} {a:?} {b:?} over GF({q})", e.label);
                        let rev = is_isomorphic(&k, &l, None).unwrap();
                        assert_eq!(rev.is_isomorphic(), eq);
                    }
                }
            }
        }
    }
}
