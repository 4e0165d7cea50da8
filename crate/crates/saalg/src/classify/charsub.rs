//! A deterministic family of characteristic subspaces. Starting from the
//! lower and upper central series and the weight filtration, one round of
//! perps, products, meets, joins and centraliser-type colons is added. The
//! construction only uses intrinsic operations, so an isomorphism carries
//! the i-th member of one family onto the i-th member of the other, and
//! the recorded derivation pattern is an isomorphism invariant.

use crate::field::Field;
use crate::linalg::Subspace;
use crate::saa_core::SAAlgebra;

use super::iso::weight_filtration;

const MAX_MEMBERS: usize = 48;

#[derive(Clone, Debug)]
pub struct CharFamily<E> {
    pub members: Vec<Subspace<E>>,
    /// For every construction step: operation code, operand indices, index
    /// of the result in `members` and its dimension.
    pub signature: Vec<(u8, usize, usize, usize, usize)>,
}

pub fn characteristic_family<F: Field>(l: &SAAlgebra<F>) -> CharFamily<F::Elem> {
    let series = l.central_series();
    let mut fam = CharFamily { members: Vec::new(), signature: Vec::new() };
    let mut seeds: Vec<Subspace<F::Elem>> = series.lower.clone();
    seeds.extend(series.upper.iter().cloned());
    if series.is_nilpotent() {
        seeds.extend(weight_filtration(l).into_iter().skip(1));
    }
    for s in seeds {
        push(&mut fam, 0, 0, 0, s);
    }
    let full = l.full_space();
    let base = fam.members.len();
    for i in 0..base {
        let p = l.perp(&fam.members[i]);
        push(&mut fam, 1, i, i, p);
    }
    for i in 0..base {
        for j in i..base {
            let p = l.product_space(&fam.members[i], &fam.members[j]);
            push(&mut fam, 2, i, j, p);
        }
    }
    let mid = fam.members.len();
    for i in 0..mid {
        for j in (i + 1)..mid {
            let m = l.meet(&fam.members[i], &fam.members[j]);
            push(&mut fam, 3, i, j, m);
            let s = l.join(&fam.members[i], &fam.members[j]);
            push(&mut fam, 4, i, j, s);
        }
    }
    let top = fam.members.len();
    for i in 0..top {
        for j in 0..top {
            if i == j {
                continue;
            }
            let c = l.colon(&full, &fam.members[i], &fam.members[j]);
            push(&mut fam, 5, i, j, c);
        }
    }
    fam
}

fn push<E: Clone + PartialEq + std::fmt::Debug>(
    fam: &mut CharFamily<E>,
    op: u8,
    i: usize,
    j: usize,
    s: Subspace<E>,
) {
    let dim = s.dim();
    let idx = match fam.members.iter().position(|m| *m == s) {
        Some(p) => p,
        None if fam.members.len() < MAX_MEMBERS => {
            fam.members.push(s);
            fam.members.len() - 1
        }
        // beyond the cap only the dimension is recorded
        None => usize::MAX,
    };
    fam.signature.push((op, i, j, idx, dim));
}
