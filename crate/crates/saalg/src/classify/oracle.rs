//! Brute-force check in dimension 4: the orbits of Sp_4(F) on alternating
//! trilinear forms of the 4-dimensional symplectic space, for |F| in {2, 3}.
//! Symplectic transvections u -> u + (u, v) v generate Sp_4 over prime
//! fields, so orbits are the connected components of the graph they induce.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::linalg::{unit_vec, SymplecticForm, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub field: String,
    pub forms: usize,
    pub orbits: usize,
    /// Orbit sizes, ascending.
    pub sizes: Vec<usize>,
    /// Size of the orbit of the zero form.
    pub zero_orbit: usize,
}

const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// gamma(u, v, w) for the alternating form with the given values on the
/// basis triples.
fn eval(f: &Gf, vals: &[u8; 4], u: &[u8], v: &[u8], w: &[u8]) -> u8 {
    let mut acc = 0;
    for (t, val) in TRIPLES.iter().zip(vals) {
        if *val == 0 {
            continue;
        }
        let [a, b, c] = *t;
        // 3x3 determinant of the a, b, c coordinates
        let m = |p: usize, q: usize, r: usize| f.mul(&u[p], &f.mul(&v[q], &w[r]));
        let pos = f.add(&f.add(&m(a, b, c), &m(b, c, a)), &m(c, a, b));
        let neg = f.add(&f.add(&m(a, c, b), &m(b, a, c)), &m(c, b, a));
        acc = f.add(&acc, &f.mul(val, &f.sub(&pos, &neg)));
    }
    acc
}

pub fn orbit_oracle_dim4(f: &Gf) -> Result<OrbitCensus> {
    let q = f.q();
    if !matches!(q, 2 | 3) {
        return Err(Error::UnsupportedField);
    }
    let elems = f.elements().expect("finite field");
    let form = SymplecticForm::new(2);
    let encode = |vals: &[u8; 4]| -> usize {
        vals.iter().rev().fold(0, |acc, x| acc * q + elems.iter().position(|e| e == x).unwrap())
    };
    let decode = |mut x: usize| -> [u8; 4] {
        let mut out = [0u8; 4];
        for o in out.iter_mut() {
            *o = elems[x % q];
            x /= q;
        }
        out
    };
    // images of the standard basis under every transvection
    let mut gens: Vec<Vec<Vector<u8>>> = Vec::new();
    for idx in 1..q.pow(4) {
        let v: Vector<u8> = decode(idx).to_vec();
        let images = (0..4)
            .map(|i| {
                let e = unit_vec(f, 4, i);
                let c = form.pair(f, &e, &v);
                crate::linalg::vec_add(f, &e, &crate::linalg::vec_scale(f, &c, &v))
            })
            .collect();
        gens.push(images);
    }
    let total = q.pow(4);
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in 0..total {
        let vals = decode(x);
        for g in &gens {
            let mut out = [0u8; 4];
            for (o, [a, b, c]) in out.iter_mut().zip(TRIPLES) {
                *o = eval(f, &vals, &g[a], &g[b], &g[c]);
            }
            let (ra, rb) = (find(&mut parent, x), find(&mut parent, encode(&out)));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut size = vec![0usize; total];
    for x in 0..total {
        let r = find(&mut parent, x);
        size[r] += 1;
    }
    let zero_orbit = size[find(&mut parent, 0)];
    let mut sizes: Vec<usize> = size.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable();
    Ok(OrbitCensus { field: f.spec().name(), forms: total, orbits: sizes.len(), sizes, zero_orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    #[test]
    fn two_orbits() {
        for (q, n) in [(2, 16), (3, 81)] {
            let c = orbit_oracle_dim4(&gf(q)).unwrap();
            assert_eq!(c.orbits, 2);
            assert_eq!(c.sizes.iter().sum::<usize>(), n);
            assert_eq!(c.zero_orbit, 1);
        }
        assert!(matches!(orbit_oracle_dim4(&gf(5)), Err(Error::UnsupportedField)));
        assert!(matches!(orbit_oracle_dim4(&gf(4)), Err(Error::UnsupportedField)));
    }

    #[test]
    fn transvections_preserve_the_form() {
        let f = gf(3);
        let form = SymplecticForm::new(2);
        let v = vec![1u8, 2, 0, 1];
        let t = |u: &[u8]| {
            let c = form.pair(&f, u, &v);
            crate::linalg::vec_add(&f, u, &crate::linalg::vec_scale(&f, &c, &v))
        };
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (unit_vec(&f, 4, i), unit_vec(&f, 4, j));
                assert_eq!(form.pair(&f, &t(&a), &t(&b)), form.pair(&f, &a, &b));
            }
        }
    }
}
