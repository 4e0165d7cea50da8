//! The two discriminants that split branches in dimension 10: the type of
//! the pencil of forms phi_z in the isotropic-center-4 case, and the
//! minimal polynomial of tau in the isotropic-center-3 case.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{inverse, mat_mul, vec_add, vec_scale, Matrix, Vector};
use crate::saa_core::SAAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PencilType {
    A,
    B,
    C,
}

/// Outcome of [`type_abc`]: the type, the number of projective points of
/// L^2/Z(L) with a degenerate form, and the binary quadratic
/// Pf(a z_1 + b z_2) = c0 a^2 + c1 ab + c2 b^2 in canonical element strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilReport {
    pub kind: PencilType,
    pub degenerate_points: usize,
    pub pfaffian: [String; 3],
}

fn pf4<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let t1 = f.mul(&m[0][1], &m[2][3]);
    let t2 = f.mul(&m[0][2], &m[1][3]);
    let t3 = f.mul(&m[0][3], &m[1][2]);
    f.add(&f.sub(&t1, &t2), &t3)
}

/// Type A, B or C of a nilpotent algebra of dimension 10 with isotropic
/// center of dimension 4 and L^3 = Z(L).
pub fn type_abc<F: Field>(l: &SAAlgebra<F>) -> Result<PencilReport> {
    let f = l.field();
    if f.order().is_none() {
        return Err(Error::UnsupportedField);
    }
    let wrong = |m: &str| Err(Error::WrongBranch(m.into()));
    if l.dim() != 10 {
        return wrong("dimension is not 10");
    }
    let series = l.central_series();
    if !series.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let c = l.center_rank();
    if c.center.dim() != 4 || !c.isotropic {
        return wrong("center is not isotropic of dimension 4");
    }
    let l2 = series.l(2).clone();
    if *series.l(3) != c.center {
        return wrong("L^3 differs from Z(L)");
    }
    let z = l2.complement_in(f, &c.center);
    let u = l.full_space().complement_in(f, &l2);
    debug_assert_eq!((z.len(), u.len()), (2, 4));
    let form_of = |w: &Vector<F::Elem>| -> Matrix<F::Elem> {
        (0..4)
            .map(|i| {
                let wu = l.mul(w, &u[i]);
                (0..4).map(|j| l.pair(&wu, &u[j])).collect()
            })
            .collect()
    };
    // Pf is quadratic on L^2/Z(L): recover its coefficients from three values
    let m1 = form_of(&z[0]);
    let m2 = form_of(&z[1]);
    let p1 = pf4(f, &m1);
    let p2 = pf4(f, &m2);
    let sum: Matrix<F::Elem> = m1
        .iter()
        .zip(&m2)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect())
        .collect();
    let p12 = f.sub(&f.sub(&pf4(f, &sum), &p1), &p2);
    let elems = f.elements().expect("finite field");
    let mut degenerate = 0;
    // points (1 : t) and (0 : 1)
    for t in &elems {
        let v = f.add(&f.add(&p1, &f.mul(&p12, t)), &f.mul(&p2, &f.mul(t, t)));
        if f.is_zero(&v) {
            degenerate += 1;
        }
    }
    if f.is_zero(&p2) {
        degenerate += 1;
    }
    let kind = match degenerate {
        0 => PencilType::C,
        1 => PencilType::B,
        _ => PencilType::A,
    };
    if kind == PencilType::C {
        // no projective zero means the quadratic has no root in either chart
        assert!(!f.is_zero(&p1) && !f.is_zero(&p2));
        let a = f.div(&p12, &p1).unwrap();
        let b = f.div(&p2, &p1).unwrap();
        assert!(!f.quadratic_has_root(&a, &b), "type C pencil with a root");
    }
    Ok(PencilReport {
        kind,
        degenerate_points: degenerate,
        pfaffian: [f.format_elem(&p1), f.format_elem(&p12), f.format_elem(&p2)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TauClass {
    DistinctRoots,
    DoubleRoot,
    Irreducible,
}

/// Outcome of [`tau_minpoly`]: the class and the minimal polynomial
/// t^2 + a t + b as `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauReport {
    pub class: TauClass,
    pub minpoly: [String; 2],
}

/// Minimal polynomial of tau = psi phi^-1 on L^5 for a nilpotent algebra of
/// dimension 10 with isotropic center of dimension 3, dim L^3 = 6 and
/// L^3 L^2 = L^5. The complements y2 of L^3 in L^2 and y3 of L^2 in Z_4(L)
/// are the lowest-index ones unless `shift` is given, in which case y2 and
/// y3 are moved by the listed elements of L^3 and by a multiple of y2.
pub fn tau_minpoly<F: Field>(l: &SAAlgebra<F>) -> Result<TauReport> {
    let first = tau_with(l, None)?;
    // a second complement pair must give the same class
    let f = l.field();
    let l3 = l.central_series().l(3).clone();
    let (u, v) = (&l3.basis()[0], &l3.basis()[l3.dim() - 1]);
    let one = f.one();
    let second = tau_with(l, Some((&one, &one, &one, u, v)))?;
    assert_eq!(first.class, second.class, "tau class depends on the complement");
    Ok(first)
}

/// As [`tau_minpoly`] with y2 -> c y2 + u, y3 -> a y3 + b y2 + v.
pub fn tau_minpoly_shifted<F: Field>(
    l: &SAAlgebra<F>,
    shift: (&F::Elem, &F::Elem, &F::Elem, &[F::Elem], &[F::Elem]),
) -> Result<TauReport> {
    tau_with(l, Some(shift))
}

#[allow(clippy::type_complexity)]
fn tau_with<F: Field>(
    l: &SAAlgebra<F>,
    shift: Option<(&F::Elem, &F::Elem, &F::Elem, &[F::Elem], &[F::Elem])>,
) -> Result<TauReport> {
    let f = l.field();
    if f.order().is_none() {
        return Err(Error::UnsupportedField);
    }
    let wrong = |m: &str| Err(Error::WrongBranch(m.into()));
    if l.dim() != 10 {
        return wrong("dimension is not 10");
    }
    let s = l.central_series();
    if !s.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let c = l.center_rank();
    if c.center.dim() != 3 || !c.isotropic {
        return wrong("center is not isotropic of dimension 3");
    }
    let (l2, l3, l4, l5) = (s.l(2), s.l(3), s.l(4), s.l(5));
    if l3.dim() != 6 {
        return wrong("dim L^3 is not 6");
    }
    if l.product_space(l3, l2) != *l5 || l5.dim() != 2 {
        return wrong("L^3 L^2 differs from L^5");
    }
    let z4 = s.z(4).clone();
    let mut y2 = l2.complement_in(f, l3)[0].clone();
    let mut y3 = z4.complement_in(f, l2)[0].clone();
    if let Some((cc, a, b, u, v)) = shift {
        assert!(l3.contains(f, u) && l3.contains(f, v));
        y2 = vec_add(f, &vec_scale(f, cc, &y2), u);
        let t = vec_add(f, &vec_scale(f, a, &y3), &vec_scale(f, b, &y2));
        y3 = vec_add(f, &t, v);
    }
    let base = l3.complement_in(f, l4);
    // matrices with columns phi(u_i), psi(u_i) in L^5 coordinates
    let col = |w: &Vector<F::Elem>| -> Vec<Vector<F::Elem>> {
        base.iter().map(|u| l5.coords(&l.mul(u, w))).collect()
    };
    let to_matrix = |cols: Vec<Vector<F::Elem>>| -> Matrix<F::Elem> {
        (0..2).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let phi = to_matrix(col(&y2));
    let psi = to_matrix(col(&y3));
    let phi_inv = inverse(f, &phi).ok_or(Error::PhiNotBijective)?;
    let tau = mat_mul(f, &psi, &phi_inv, 2);
    let tr = f.add(&tau[0][0], &tau[1][1]);
    let det = f.sub(&f.mul(&tau[0][0], &tau[1][1]), &f.mul(&tau[0][1], &tau[1][0]));
    if f.is_zero(&tau[0][1]) && f.is_zero(&tau[1][0]) && tau[0][0] == tau[1][1] {
        return wrong("tau is scalar");
    }
    // minimal polynomial t^2 - tr t + det
    let a = f.neg(&tr);
    let b = det;
    let double = if f.characteristic() == 2 {
        f.is_zero(&a)
    } else {
        let two = f.add(&f.one(), &f.one());
        let disc = f.sub(&f.mul(&a, &a), &f.mul(&f.mul(&two, &two), &b));
        f.is_zero(&disc)
    };
    let class = if double {
        TauClass::DoubleRoot
    } else if f.quadratic_has_root(&a, &b) {
        TauClass::DistinctRoots
    } else {
        TauClass::Irreducible
    };
    Ok(TauReport { class, minpoly: [f.format_elem(&a), f.format_elem(&b)] })
}
