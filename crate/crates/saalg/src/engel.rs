//! The group side over GF(3): the powerful 2-Engel 3-group G(L) attached to
//! an algebra L of dimension 2r, with exact arithmetic in the normal form
//! h_1^{a_1} ... h_{2r}^{a_{2r}} x^b (a_i mod 9, b mod 27).
//!
//! Generator h_i lifts the basis vector u_i (interleaved x_1, y_1, x_2, ...)
//! and x is central of order 27. The defining commutators are
//!
//!   [h_i, h_j] = h_1^{3 alpha_ij(1)} ... h_{2r}^{3 alpha_ij(2r)} x^{3 beta_ij}
//!
//! where u_i u_j = sum_k alpha_ij(k) u_k and beta_ij = (u_i, u_j).
//!
//! Collection rests on three facts about these groups. Cubes of generators
//! commute with each other, [h_k^3, h_l] = x^{9 beta_kl} is central, and
//! [h_j, h_i, h_j] = x^{9 (u_j u_i, u_j)} = 1. Hence the class-3 formula for
//! commutators of powers collapses to [h_j^a, h_i^c] = [h_j, h_i]^{ac}, and
//! moving a letter leftwards past the tail of a normal word only ever inserts
//! cube letters and powers of x. Correctness is certified by the associativity
//! tests rather than assumed.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::linalg::{basis_name, Subspace};
use crate::saa_core::SAAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PCElement {
    /// Exponents of h_1..h_{2r}, each in 0..9.
    pub a: Vec<u8>,
    /// Exponent of x, in 0..27.
    pub b: u8,
}

impl PCElement {
    pub fn identity(d: usize) -> Self {
        PCElement { a: vec![0; d], b: 0 }
    }
    pub fn is_identity(&self) -> bool {
        self.b == 0 && self.a.iter().all(|&e| e == 0)
    }
    /// Lies in the subgroup G^3 = <h_i^3, x^3>.
    pub fn is_cube(&self) -> bool {
        self.b.is_multiple_of(3) && self.a.iter().all(|&e| e % 3 == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCGroup {
    pub r: usize,
    /// alpha[i][j][k], antisymmetric in i, j; entries in 0..3.
    alpha: Vec<Vec<Vec<u8>>>,
    /// beta[i][j] = (u_i, u_j); entries in 0..3.
    beta: Vec<Vec<u8>>,
}

fn m9(v: i64) -> u8 {
    v.rem_euclid(9) as u8
}
fn m27(v: i64) -> u8 {
    v.rem_euclid(27) as u8
}

/// (u_i, u_j) for the standard form in the interleaved basis.
fn std_form(i: usize, j: usize) -> u8 {
    if i / 2 != j / 2 || i == j {
        0
    } else if i.is_multiple_of(2) {
        1
    } else {
        2
    }
}

pub fn group_from_saa(l: &SAAlgebra<Gf>) -> Result<PCGroup> {
    if l.field().q() != 3 {
        return Err(Error::WrongField);
    }
    let d = l.dim();
    let alpha = (0..d)
        .map(|i| (0..d).map(|j| l.basis_product(i, j).clone()).collect())
        .collect();
    let beta = (0..d).map(|i| (0..d).map(|j| std_form(i, j)).collect()).collect();
    Ok(PCGroup { r: l.n(), alpha, beta })
}

impl PCGroup {
    /// Number of h generators.
    pub fn rank(&self) -> usize {
        2 * self.r
    }

    pub fn alpha(&self, i: usize, j: usize) -> &[u8] {
        &self.alpha[i][j]
    }
    pub fn beta(&self, i: usize, j: usize) -> u8 {
        self.beta[i][j]
    }

    /// |G| = 9^{2r} 27, the number of normal forms.
    pub fn order(&self) -> u128 {
        9u128.pow(self.rank() as u32) * 27
    }

    pub fn identity(&self) -> PCElement {
        PCElement::identity(self.rank())
    }
    pub fn h(&self, i: usize) -> PCElement {
        let mut g = self.identity();
        g.a[i] = 1;
        g
    }
    pub fn x(&self) -> PCElement {
        let mut g = self.identity();
        g.b = 1;
        g
    }

    /// Multiplies the normal word (e, xb) on the right by h_i^c.
    fn push(&self, e: &mut [u8], xb: &mut i64, i: usize, c: i64) {
        let c = c.rem_euclid(9);
        if c == 0 {
            return;
        }
        let d = self.rank();
        let tail: Vec<(usize, i64)> = (i + 1..d).filter(|&l| e[l] != 0).map(|l| (l, e[l] as i64)).collect();
        for &(l, _) in &tail {
            e[l] = 0;
        }
        e[i] = m9(e[i] as i64 + c);
        // h_l^t h_i^c = h_i^c h_l^t [h_l, h_i]^{tc}, and
        // [h_l, h_i] = [h_i, h_l]^{-1} is a product of commuting cube letters
        for (l, t) in tail {
            self.push(e, xb, l, t);
            let n = t * c;
            for (k, &a) in self.alpha[i][l].iter().enumerate() {
                if a != 0 {
                    self.push(e, xb, k, -3 * a as i64 * n);
                }
            }
            *xb -= 3 * self.beta[i][l] as i64 * n;
        }
    }

    pub fn multiply(&self, g: &PCElement, h: &PCElement) -> PCElement {
        let mut e = g.a.clone();
        let mut xb = g.b as i64 + h.b as i64;
        for (i, &c) in h.a.iter().enumerate() {
            self.push(&mut e, &mut xb, i, c as i64);
        }
        PCElement { a: e, b: m27(xb) }
    }

    pub fn inverse(&self, g: &PCElement) -> PCElement {
        let mut e = vec![0; self.rank()];
        let mut xb = -(g.b as i64);
        for (i, &c) in g.a.iter().enumerate().rev() {
            self.push(&mut e, &mut xb, i, -(c as i64));
        }
        PCElement { a: e, b: m27(xb) }
    }

    pub fn pow(&self, g: &PCElement, n: u64) -> PCElement {
        let (mut acc, mut base, mut n) = (self.identity(), g.clone(), n);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// [g, h] = g^{-1} h^{-1} g h.
    pub fn commutator(&self, g: &PCElement, h: &PCElement) -> PCElement {
        let gh = self.multiply(g, h);
        let hg = self.multiply(h, g);
        self.multiply(&self.inverse(&hg), &gh)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> PCElement {
        PCElement {
            a: (0..self.rank()).map(|_| rng.random_range(0..9)).collect(),
            b: rng.random_range(0..27),
        }
    }

    /// Power-commutator presentation, one relation per line.
    pub fn presentation_text(&self) -> String {
        let d = self.rank();
        let name = |i: usize| format!("h{}({})", i + 1, basis_name(i));
        let mut s = String::new();
        let gens: Vec<String> = (0..d).map(name).collect();
        writeln!(s, "generators: {}, x", gens.join(", ")).unwrap();
        writeln!(s, "order: 3^{}", 3 + 4 * self.r).unwrap();
        for i in 0..d {
            writeln!(s, "{}^9 = 1", name(i)).unwrap();
        }
        writeln!(s, "x^27 = 1").unwrap();
        writeln!(s, "x central").unwrap();
        for i in 0..d {
            for j in i + 1..d {
                let c = self.commutator(&self.h(i), &self.h(j));
                writeln!(s, "[{}, {}] = {}", name(i), name(j), self.format(&c)).unwrap();
            }
        }
        s
    }

    /// An element as a word; exponents printed as signed representatives.
    pub fn format(&self, g: &PCElement) -> String {
        let signed = |v: u8, m: u8| if v > m / 2 { v as i64 - m as i64 } else { v as i64 };
        let mut parts: Vec<String> = Vec::new();
        for (i, &a) in g.a.iter().enumerate() {
            if a != 0 {
                parts.push(format!("h{}^{}", i + 1, signed(a, 9)));
            }
        }
        if g.b != 0 {
            parts.push(format!("x^{}", signed(g.b, 27)));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

pub fn pc_multiply(g: &PCGroup, a: &PCElement, b: &PCElement) -> PCElement {
    g.multiply(a, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub samples: usize,
    pub seed: u64,
    pub order: String,
    pub order_log3: usize,
    /// 3 when some generator triple commutator is non-trivial, else at most 2.
    pub class: usize,
    pub laws: Vec<String>,
}

/// Checks the defining laws of the class on seeded random samples.
pub fn check_group_laws(g: &PCGroup, samples: usize, seed: u64) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = g.identity();
    let fail = |what: &str, els: &[&PCElement]| {
        let shown: Vec<String> = els.iter().map(|e| g.format(e)).collect();
        Err(Error::LawViolation(format!("{what} fails at {}", shown.join(", "))))
    };
    for _ in 0..samples {
        let a = g.random_element(&mut rng);
        let b = g.random_element(&mut rng);
        let c = g.random_element(&mut rng);
        if g.multiply(&g.multiply(&a, &b), &c) != g.multiply(&a, &g.multiply(&b, &c)) {
            return fail("associativity", &[&a, &b, &c]);
        }
        if g.multiply(&a, &g.inverse(&a)) != id {
            return fail("inverse", &[&a]);
        }
        if g.pow(&a, 27) != id {
            return fail("g^27 = 1", &[&a]);
        }
        let mut h = a.clone();
        h.b = (h.b / 3) * 3;
        if g.pow(&h, 9) != id {
            return fail("h^9 = 1 on H", &[&h]);
        }
        let ab = g.commutator(&a, &b);
        if !ab.is_cube() {
            return fail("[G, G] <= G^3", &[&a, &b]);
        }
        if !g.commutator(&ab, &b).is_identity() {
            return fail("2-Engel", &[&a, &b]);
        }
        let abc = g.commutator(&ab, &c);
        if abc != g.commutator(&g.commutator(&b, &c), &a) {
            return fail("[a,b,c] = [b,c,a]", &[&a, &b, &c]);
        }
        if !g.pow(&abc, 3).is_identity() {
            return fail("[a,b,c]^3 = 1", &[&a, &b, &c]);
        }
        let d = g.random_element(&mut rng);
        if !g.commutator(&abc, &d).is_identity() {
            return fail("class 3", &[&a, &b, &c, &d]);
        }
        if g.multiply(&a, &g.x()) != g.multiply(&g.x(), &a) {
            return fail("x central", &[&a]);
        }
    }
    if g.pow(&g.x(), 9).is_identity() || !g.pow(&g.x(), 27).is_identity() {
        return Err(Error::LawViolation("x does not have order 27".into()));
    }
    let order_log3 = 3 + 4 * g.r;
    if g.order() != 3u128.pow(order_log3 as u32) {
        return Err(Error::LawViolation("wrong group order".into()));
    }
    let d = g.rank();
    let mut class = 2;
    'outer: for i in 0..d {
        for j in 0..d {
            let c = g.commutator(&g.h(i), &g.h(j));
            for k in 0..d {
                if !g.commutator(&c, &g.h(k)).is_identity() {
                    class = 3;
                    break 'outer;
                }
            }
        }
    }
    let laws = [
        "associativity",
        "inverse",
        "g^27 = 1",
        "h^9 = 1 on H",
        "[G, G] <= G^3",
        "2-Engel",
        "[a,b,c] = [b,c,a]",
        "[a,b,c]^3 = 1",
        "class 3",
        "x central of order 27",
        "order 3^(3+4r)",
    ];
    Ok(LawReport {
        samples,
        seed,
        order: g.order().to_string(),
        order_log3,
        class,
        laws: laws.iter().map(|s| s.to_string()).collect(),
    })
}

/// Reads L(G) back off the group: u_i u_j from the cube root of
/// [h_i, h_j] modulo the center, (u_i, u_j) from [h_i, h_j]^3 = x^{9 beta}.
pub fn saa_from_group(g: &PCGroup) -> Result<SAAlgebra<Gf>> {
    let f = Gf::prime(3)?;
    let d = g.rank();
    let mut prod = vec![vec![vec![0u8; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let c = g.commutator(&g.h(i), &g.h(j));
            if !c.is_cube() {
                return Err(Error::NotClassC(format!("[h{}, h{}] is not a cube", i + 1, j + 1)));
            }
            prod[i][j] = c.a.iter().map(|&e| (e / 3) % 3).collect();
            let cube = g.pow(&c, 3);
            if cube.a.iter().any(|&e| e != 0) || !cube.b.is_multiple_of(9) {
                return Err(Error::NotClassC(format!("[h{}, h{}]^3 is not a power of x^9", i + 1, j + 1)));
            }
            if cube.b / 9 != std_form(i, j) {
                return Err(Error::NotClassC("form is not in standard position".into()));
            }
        }
    }
    // (u_i u_j, u_k) = sum_m alpha_ij(m) (u_m, u_k)
    let mut gamma = vec![0u8; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let v: u32 = (0..d).map(|m| prod[i][j][m] as u32 * std_form(m, k) as u32).sum();
                gamma[(i * d + j) * d + k] = (v % 3) as u8;
            }
        }
    }
    let l = SAAlgebra::from_tensor(&f, g.r, gamma);
    if !l.check_axioms().all_pass() {
        return Err(Error::NotClassC("recovered tensor is not alternating".into()));
    }
    Ok(l)
}

/// Lifts a vector of L to h_1^{v_1} ... h_{2r}^{v_{2r}}.
fn lift(v: &[u8]) -> PCElement {
    PCElement { a: v.to_vec(), b: 0 }
}

/// Decides whether the chain of ideals 0 = H_0 <= ... <= H_n = L lifts to a
/// powerfully central chain {1} <= <x> <= <H_0, x> <= ... <= <H_n, x> = G,
/// by collecting the commutators of spanning elements.
pub fn powerfully_central_chain_check(g: &PCGroup, l: &SAAlgebra<Gf>, chain: &[Subspace<u8>]) -> Result<bool> {
    let f = l.field();
    let d = g.rank();
    if l.dim() != d {
        return Err(Error::DimMismatch);
    }
    if chain.is_empty() || !chain[0].is_zero() || !chain[chain.len() - 1].is_full() {
        return Err(Error::NotIdealChain("chain must run from 0 to L".into()));
    }
    for (k, s) in chain.iter().enumerate() {
        if !l.is_ideal(s) {
            return Err(Error::NotIdealChain(format!("term {k} is not an ideal")));
        }
        if k > 0 && !s.contains_space(f, &chain[k - 1]) {
            return Err(Error::NotIdealChain(format!("term {k} does not contain term {}", k - 1)));
        }
    }
    let all: Vec<PCElement> = (0..d).map(|i| g.h(i)).chain([g.x()]).collect();
    // <B, x>^3 = { h^{3v} x^{3m} : v in B }
    let in_cubes = |c: &PCElement, b: &Subspace<u8>| {
        c.is_cube() && b.contains(f, &c.a.iter().map(|&e| (e / 3) % 3).collect::<Vec<u8>>())
    };
    for w in chain.windows(2) {
        let (below, term) = (&w[0], &w[1]);
        let mut span: Vec<PCElement> = term.basis().iter().map(|v| lift(v)).collect();
        span.extend((0..d).map(|i| g.pow(&g.h(i), 3)));
        span.push(g.x());
        for a in &span {
            for h in &all {
                if !in_cubes(&g.commutator(a, h), below) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
