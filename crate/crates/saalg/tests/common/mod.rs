#![allow(dead_code)]

use std::io::Write;

use saalg::field::{Field, FieldSpec, Gf};
use saalg::saa_core::SAAlgebra;

pub fn gf(q: u64) -> Gf {
    Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
}

/// Writes straight to the process stdout so the line shows up even when the
/// harness captures test output.
pub fn report(criterion: u32, outcome: &Result<String, String>) {
    let line = match outcome {
        Ok(detail) => format!("criterion {criterion}: PASS ({detail})\n"),
        Err(why) => format!("criterion {criterion}: FAIL ({why})\n"),
    };
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

/// Checks the structural identities every nilpotent algebra satisfies and
/// returns a description of each violation.
pub fn duality_violations<F: Field>(l: &SAAlgebra<F>) -> Vec<String> {
    let mut bad = Vec::new();
    let s = l.central_series();
    let Some(class) = s.class else {
        return vec!["not nilpotent".into()];
    };
    let d = l.dim();
    let n = l.n();
    for k in 0..=class + 1 {
        let z = s.z(k);
        let perp = l.perp(s.l(k + 1));
        if *z != perp {
            bad.push(format!("Z_{k} differs from (L^{})^perp", k + 1));
        }
        if z.dim() + s.l(k + 1).dim() != d {
            bad.push(format!("dim Z_{k} + dim L^{} != {d}", k + 1));
        }
    }
    let c = l.center_rank();
    if c.rank != c.center.dim() {
        bad.push(format!("rank {} != dim Z(L) {}", c.rank, c.center.dim()));
    }
    if d > 0 && c.center.dim() < 2 {
        bad.push("dim Z(L) < 2".into());
    }
    if n >= 3 && class > 2 * n - 3 {
        bad.push(format!("class {class} exceeds 2n-3"));
    }
    for m in 1..=class {
        let dm = s.l(m).dim();
        if dm == 1 {
            bad.push(format!("dim L^{m} = 1"));
        }
        if (2..=4).contains(&m) && dm == 2 {
            bad.push(format!("dim L^{m} = 2"));
        }
    }
    for i in 2..=class + 1 {
        let (zi, z1, z2) = (s.z(i).dim() as i64, s.z(i - 1).dim() as i64, s.z(i - 2).dim() as i64);
        if 2 * (zi - z1) > (z1 - z2) * (z1 + z2 - 1) {
            bad.push(format!("useful inequality fails at i = {i}"));
        }
    }
    bad
}
