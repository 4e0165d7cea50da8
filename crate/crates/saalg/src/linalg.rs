//! Exact vectors, matrices and subspaces over a [`Field`], and the standard
//! symplectic form on the interleaved basis x1, y1, ..., xn, yn.

use crate::error::{Error, Result};
use crate::field::Field;

pub type Vector<E> = Vec<E>;
/// Row-major matrix.
pub type Matrix<E> = Vec<Vec<E>>;

/// Index of x_i (1-based i) in the interleaved basis.
#[inline]
pub fn xi(i: usize) -> usize {
    2 * (i - 1)
}

/// Index of y_i (1-based i) in the interleaved basis.
#[inline]
pub fn yi(i: usize) -> usize {
    2 * (i - 1) + 1
}

/// Name of basis index `k`, e.g. `x1` or `y3`.
pub fn basis_name(k: usize) -> String {
    if k.is_multiple_of(2) {
        format!("x{}", k / 2 + 1)
    } else {
        format!("y{}", k / 2 + 1)
    }
}

/// Parses `x3` / `y3` into a basis index.
pub fn parse_basis_name(s: &str, n: usize) -> Result<usize> {
    let t = s.trim();
    let bad = || Error::BadIndex(format!("{t} is not a basis vector name for n = {n}"));
    let (kind, num) = t.split_at(t.len().min(1));
    let i: usize = num.parse().map_err(|_| bad())?;
    if i == 0 || i > n {
        return Err(bad());
    }
    match kind {
        "x" => Ok(xi(i)),
        "y" => Ok(yi(i)),
        _ => Err(bad()),
    }
}

pub fn zero_vec<F: Field>(f: &F, len: usize) -> Vector<F::Elem> {
    vec![f.zero(); len]
}

pub fn unit_vec<F: Field>(f: &F, len: usize, k: usize) -> Vector<F::Elem> {
    let mut v = zero_vec(f, len);
    v[k] = f.one();
    v
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|e| f.is_zero(e))
}

pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vector<F::Elem> {
    a.iter().map(|x| f.mul(c, x)).collect()
}

/// a += c * b
pub fn axpy<F: Field>(f: &F, a: &mut [F::Elem], c: &F::Elem, b: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !f.is_zero(y) {
            *x = f.add(x, &f.mul(c, y));
        }
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

/// Linear combination sum_i c_i rows_i.
pub fn combine<F: Field>(f: &F, coeffs: &[F::Elem], rows: &[Vector<F::Elem>], len: usize) -> Vector<F::Elem> {
    let mut out = zero_vec(f, len);
    for (c, r) in coeffs.iter().zip(rows) {
        axpy(f, &mut out, c, r);
    }
    out
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n).map(|i| unit_vec(f, n, i)).collect()
}

pub fn transpose<F: Field>(f: &F, m: &Matrix<F::Elem>, ncols: usize) -> Matrix<F::Elem> {
    let mut t = vec![zero_vec(f, m.len()); ncols];
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            t[j][i] = e.clone();
        }
    }
    t
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>, bcols: usize) -> Matrix<F::Elem> {
    a.iter()
        .map(|row| {
            let mut out = zero_vec(f, bcols);
            for (k, c) in row.iter().enumerate() {
                axpy(f, &mut out, c, &b[k]);
            }
            out
        })
        .collect()
}

/// M v for a row-major M.
pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vector<F::Elem> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

/// Reduces `rows` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vector<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if inv != f.one() {
            let scaled = vec_scale(f, &inv, &rows[r]);
            rows[r] = scaled;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !f.is_zero(&row[c]) {
                let c0 = f.neg(&row[c]);
                axpy(f, row, &c0, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>, ncols: usize) -> usize {
    let mut rows = m.clone();
    rref(f, &mut rows, ncols).len()
}

/// Basis of {x : M x = 0}, one vector per free column, in column order.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>, ncols: usize) -> Vec<Vector<F::Elem>> {
    let mut rows = m.clone();
    let pivots = rref(f, &mut rows, ncols);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = zero_vec(f, ncols);
        v[free] = f.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(&rows[r][free]);
        }
        out.push(v);
    }
    out
}

/// One solution of M x = b, if any.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem], ncols: usize) -> Option<Vector<F::Elem>> {
    let mut rows: Vec<Vector<F::Elem>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zero_vec(f, ncols);
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix.
pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let mut rows: Vec<Vector<F::Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(f, n, i));
            r
        })
        .collect();
    let pivots = rref(f, &mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A subspace of F^ambient stored by its unique reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }
    /// The reduced row-echelon basis.
    pub fn basis(&self) -> &[Vec<E>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Subspace { ambient, rows: identity(f, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of `vectors`; every vector must have length `ambient`.
    pub fn span<F: Field<Elem = E>>(f: &F, ambient: usize, vectors: &[Vec<E>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::AmbientMismatch(ambient, v.len()));
        }
        Ok(Self::span_unchecked(f, ambient, vectors.to_vec()))
    }

    pub fn span_unchecked<F: Field<Elem = E>>(f: &F, ambient: usize, mut rows: Vec<Vec<E>>) -> Self {
        rows.retain(|r| !is_zero_vec(f, r));
        let pivots = rref(f, &mut rows, ambient);
        Subspace { ambient, rows, pivots }
    }

    /// Span of the listed basis vectors.
    pub fn coordinate<F: Field<Elem = E>>(f: &F, ambient: usize, indices: &[usize]) -> Self {
        let rows = indices.iter().map(|&k| unit_vec(f, ambient, k)).collect();
        Self::span_unchecked(f, ambient, rows)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// v minus its projection along pivot columns; zero iff v lies in the subspace.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&w[c]) {
                let c0 = f.neg(&w[c]);
                axpy(f, &mut w, &c0, row);
            }
        }
        w
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        is_zero_vec(f, &self.reduce(f, v))
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains_space<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.dim() <= self.dim() && other.rows.iter().all(|r| self.contains(f, r))
    }

    /// Coordinates of v in the RREF basis (v must lie in the subspace).
    pub fn coords(&self, v: &[E]) -> Vec<E> {
        self.pivots.iter().map(|&c| v[c].clone()).collect()
    }

    pub fn join<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::span_unchecked(f, self.ambient, rows))
    }

    /// Adds vectors to the span.
    pub fn extend<F: Field<Elem = E>>(&self, f: &F, vectors: &[Vec<E>]) -> Self {
        let mut rows = self.rows.clone();
        rows.extend(vectors.iter().cloned());
        Self::span_unchecked(f, self.ambient, rows)
    }

    pub fn meet<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        if other.contains_space(f, self) {
            return Ok(self.clone());
        }
        if self.contains_space(f, other) {
            return Ok(other.clone());
        }
        // sum_i c_i a_i = sum_j d_j b_j: the kernel of [A^T | -B^T].
        let da = self.dim();
        let db = other.dim();
        let m: Matrix<E> = (0..self.ambient)
            .map(|k| {
                let mut row: Vec<E> = self.rows.iter().map(|r| r[k].clone()).collect();
                row.extend(other.rows.iter().map(|r| f.neg(&r[k])));
                row
            })
            .collect();
        let ker = kernel(f, &m, da + db);
        let vecs = ker
            .iter()
            .map(|c| combine(f, &c[..da], &self.rows, self.ambient))
            .collect();
        Ok(Self::span_unchecked(f, self.ambient, vecs))
    }

    pub fn meet_join<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<(Self, Self)> {
        Ok((self.meet(f, other)?, self.join(f, other)?))
    }

    /// Lowest-index standard basis vectors completing this subspace to the
    /// whole space (the non-pivot columns).
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut piv = vec![false; self.ambient];
        for &c in &self.pivots {
            piv[c] = true;
        }
        (0..self.ambient).filter(|&c| !piv[c]).collect()
    }

    /// Lowest-index basis vectors of `self` completing `sub` (which must be
    /// contained in `self`) to a basis of `self`. Returned as RREF rows of
    /// `self` that are not in the span of `sub` and the rows before them.
    pub fn complement_in<F: Field<Elem = E>>(&self, f: &F, sub: &Self) -> Vec<Vec<E>> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for r in &self.rows {
            if !acc.contains(f, r) {
                acc = acc.extend(f, std::slice::from_ref(r));
                out.push(r.clone());
            }
        }
        out
    }
}

/// A random symplectic basis: the images of the standard basis under a
/// product of `steps` random transvections u -> u + c (u, v) v. Over Q the
/// entries of v and c are drawn from -2..=2.
pub fn random_symplectic_basis<F: Field, R: rand::Rng>(f: &F, n: usize, steps: usize, rng: &mut R) -> Vec<Vector<F::Elem>> {
    let d = 2 * n;
    let form = SymplecticForm::new(n);
    let elems = f.elements().unwrap_or_else(|| {
        (-2..=2).map(|k: i64| f.parse_elem(&k.to_string()).expect("integer literal")).collect()
    });
    let pick = |rng: &mut R| elems[rng.random_range(0..elems.len())].clone();
    let mut basis: Vec<Vector<F::Elem>> = (0..d).map(|k| unit_vec(f, d, k)).collect();
    for _ in 0..steps {
        let v: Vector<F::Elem> = (0..d).map(|_| pick(rng)).collect();
        let c = pick(rng);
        for b in basis.iter_mut() {
            let t = f.mul(&c, &form.pair(f, b, &v));
            axpy(f, b, &t, &v);
        }
    }
    basis
}

/// The standard alternating form: (x_i, y_i) = 1 = -(y_i, x_i), all other
/// basis pairings 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        SymplecticForm { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn pair<F: Field>(&self, f: &F, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        let mut acc = f.zero();
        for a in 0..self.n {
            let (x, y) = (2 * a, 2 * a + 1);
            acc = f.add(&acc, &f.sub(&f.mul(&u[x], &v[y]), &f.mul(&u[y], &v[x])));
        }
        acc
    }

    /// The Gram matrix J.
    pub fn matrix<F: Field>(&self, f: &F) -> Matrix<F::Elem> {
        let d = self.dim();
        let mut j = vec![zero_vec(f, d); d];
        for a in 0..self.n {
            j[2 * a][2 * a + 1] = f.one();
            j[2 * a + 1][2 * a] = f.neg(&f.one());
        }
        j
    }

    /// The covector w with w . v = (u, v).
    pub fn covector<F: Field>(&self, f: &F, u: &[F::Elem]) -> Vector<F::Elem> {
        let mut w = zero_vec(f, self.dim());
        for a in 0..self.n {
            w[2 * a + 1] = u[2 * a].clone();
            w[2 * a] = f.neg(&u[2 * a + 1]);
        }
        w
    }

    pub fn gram<F: Field>(&self, f: &F, basis: &[Vector<F::Elem>]) -> Matrix<F::Elem> {
        basis
            .iter()
            .map(|u| basis.iter().map(|v| self.pair(f, u, v)).collect())
            .collect()
    }

    pub fn perp<F: Field>(&self, f: &F, s: &Subspace<F::Elem>) -> Result<Subspace<F::Elem>> {
        if s.ambient() != self.dim() {
            return Err(Error::AmbientMismatch(self.dim(), s.ambient()));
        }
        let m: Matrix<F::Elem> = s.basis().iter().map(|u| self.covector(f, u)).collect();
        let ker = kernel(f, &m, self.dim());
        Ok(Subspace::span_unchecked(f, self.dim(), ker))
    }

    pub fn is_isotropic<F: Field>(&self, f: &F, s: &Subspace<F::Elem>) -> bool {
        let b = s.basis();
        b.iter()
            .enumerate()
            .all(|(i, u)| b[i + 1..].iter().all(|v| f.is_zero(&self.pair(f, u, v))))
    }

    /// Whether M^T J M = J, where the columns of `m` (given as rows `cols`)
    /// are the images of the basis vectors.
    pub fn is_symplectic_basis<F: Field>(&self, f: &F, cols: &[Vector<F::Elem>]) -> bool {
        cols.len() == self.dim() && self.gram(f, cols) == self.matrix(f)
    }
}

/// Completes an ascending chain of isotropic subspaces of dims 1..n (a
/// leading zero subspace is accepted and skipped) to a standard basis
/// x~1, y~1, ..., x~n, y~n with span{x~n, ..., x~(n+1-r)} = chain[r].
pub fn darboux_complete<F: Field>(
    f: &F,
    chain: &[Subspace<F::Elem>],
    form: &SymplecticForm,
) -> Result<Vec<Vector<F::Elem>>> {
    let n = form.n;
    let d = form.dim();
    let chain: Vec<&Subspace<F::Elem>> = chain.iter().skip_while(|s| s.is_zero()).collect();
    if chain.len() != n {
        return Err(Error::ChainNotAscending(chain.len()));
    }
    let mut prev = Subspace::zero(d);
    let mut xs = vec![Vec::new(); n];
    for (r, s) in chain.iter().enumerate() {
        if s.ambient() != d {
            return Err(Error::AmbientMismatch(d, s.ambient()));
        }
        if s.dim() != r + 1 || !s.contains_space(f, &prev) {
            return Err(Error::ChainNotAscending(r + 1));
        }
        if !form.is_isotropic(f, s) {
            return Err(Error::ChainNotIsotropic(r + 1));
        }
        let new = s.complement_in(f, &prev);
        xs[n - 1 - r] = new[0].clone();
        prev = (*s).clone();
    }
    // Pair the Lagrangian W = span(xs) with its lowest-index coordinate complement.
    let w = prev;
    let comp: Vec<Vector<F::Elem>> = w
        .complement_indices()
        .into_iter()
        .map(|k| unit_vec(f, d, k))
        .collect();
    let p: Matrix<F::Elem> = xs
        .iter()
        .map(|x| comp.iter().map(|c| form.pair(f, x, c)).collect())
        .collect();
    let q = inverse(f, &p).ok_or(Error::ChainNotIsotropic(n))?;
    // y'_j = sum_k comp_k q[k][j] so that (x_i, y'_j) = delta_ij.
    let mut ys: Vec<Vector<F::Elem>> = (0..n)
        .map(|j| {
            let coeffs: Vec<F::Elem> = (0..n).map(|k| q[k][j].clone()).collect();
            combine(f, &coeffs, &comp, d)
        })
        .collect();
    // Make the y's isotropic: y_j += sum_{i<j} (y'_i, y'_j) x_i.
    let a = form.gram(f, &ys);
    for j in 0..n {
        for i in 0..j {
            let c = a[i][j].clone();
            let xi = xs[i].clone();
            axpy(f, &mut ys[j], &c, &xi);
        }
    }
    let mut out = Vec::with_capacity(d);
    for i in 0..n {
        out.push(xs[i].clone());
        out.push(ys[i].clone());
    }
    Ok(out)
}
