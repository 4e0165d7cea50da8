//! Enumeration harness: build nilpotent presentations, classify each one and
//! tally the labels.
//!
//! A nilpotent presentation on x_1, y_1, ..., x_n, y_n prescribes
//! (x_i y_j, y_k) and (y_i y_j, y_k) for i < j < k, every other triple of
//! basis vectors being zero up to the symmetries of the tensor. The
//! triangular shape makes every such algebra nilpotent, and there are
//! 2 C(n,3) parameters.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::index::CatalogIndex;
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::linalg::{xi, yi};
use crate::saa_core::SAAlgebra;

/// Largest number of presentations an exhaustive census accepts.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub field: String,
    pub n: usize,
    pub mode: String,
    pub counts: BTreeMap<String, u64>,
    pub no_match: u64,
    pub seed: Option<u64>,
    pub total: u64,
    /// First few NoMatch messages, for diagnosis.
    pub failures: Vec<String>,
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The index triples (0-based i < j < k) of the parameters, in order:
/// first every (x_i y_j, y_k), then every (y_i y_j, y_k).
pub fn parameter_slots(n: usize) -> Vec<(usize, usize, usize)> {
    let mut ijk = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                ijk.push((i, j, k));
            }
        }
    }
    let mut out: Vec<_> = ijk.iter().map(|&(i, j, k)| (xi(i), yi(j), yi(k))).collect();
    out.extend(ijk.iter().map(|&(i, j, k)| (yi(i), yi(j), yi(k))));
    out
}

/// The algebra with the given parameter values.
pub fn presentation_algebra<F: Field>(f: &F, n: usize, values: &[F::Elem]) -> Result<SAAlgebra<F>> {
    let slots = parameter_slots(n);
    assert_eq!(slots.len(), values.len());
    let triples: Vec<_> = slots
        .into_iter()
        .zip(values)
        .filter(|(_, v)| !f.is_zero(v))
        .map(|((a, b, c), v)| (a, b, c, v.clone()))
        .collect();
    SAAlgebra::from_triples(f, n, &triples)
}

type Tally = (BTreeMap<String, u64>, Vec<String>, u64);

fn merge(mut a: Tally, b: Tally) -> Tally {
    for (k, v) in b.0 {
        *a.0.entry(k).or_default() += v;
    }
    a.1.extend(b.1);
    a.1.truncate(5);
    a.2 += b.2;
    a
}

/// Presentations classified between two progress reports.
const CHUNK: u64 = 20_000;

/// Builds, classifies and tallies presentations over a finite field.
pub fn enumerate_and_classify(f: &Gf, n: usize, mode: CensusMode) -> Result<CensusReport> {
    enumerate_with_progress(f, n, mode, |_| {})
}

/// As [`enumerate_and_classify`], handing the running tally to `progress`
/// after every chunk of presentations.
pub fn enumerate_with_progress(
    f: &Gf,
    n: usize,
    mode: CensusMode,
    progress: impl Fn(&CensusReport),
) -> Result<CensusReport> {
    let slots = parameter_slots(n).len();
    let elems = f.elements().ok_or(Error::UnsupportedField)?;
    let q = elems.len() as u64;
    if mode == CensusMode::Exhaustive && q.checked_pow(slots as u32).is_none_or(|t| t > EXHAUSTIVE_LIMIT) {
        return Err(Error::TooLargeForExhaustive(format!("{q}^{slots} presentations exceed {EXHAUSTIVE_LIMIT}")));
    }
    let index = CatalogIndex::new(f, 2 * n)?;
    let digits = |mut x: u64| -> Vec<u8> {
        (0..slots)
            .map(|_| {
                let e = elems[(x % q) as usize];
                x /= q;
                e
            })
            .collect()
    };
    let classify_one = |values: &[u8]| -> Tally {
        let mut counts = BTreeMap::new();
        let outcome = presentation_algebra(f, n, values).and_then(|l| index.classify(&l));
        match outcome {
            Ok(c) => {
                counts.insert(c.key, 1);
                (counts, Vec::new(), 0)
            }
            Err(e) => (counts, vec![format!("{values:?}: {e}")], 1),
        }
    };
    let (mode_name, seed, total) = match mode {
        CensusMode::Exhaustive => ("exhaustive", None, q.pow(slots as u32)),
        CensusMode::Sample { count, seed } => ("sample", Some(seed), count),
    };
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut report = CensusReport {
        field: f.spec().name(),
        n,
        mode: mode_name.to_string(),
        counts: BTreeMap::new(),
        no_match: 0,
        seed,
        total,
        failures: Vec::new(),
    };
    let mut done = 0;
    while done < total {
        let end = (done + CHUNK).min(total);
        let inputs: Vec<Vec<u8>> = match rng.as_mut() {
            None => (done..end).map(digits).collect(),
            Some(rng) => (done..end)
                .map(|_| (0..slots).map(|_| elems[rng.random_range(0..elems.len())]).collect())
                .collect(),
        };
        let empty = || (BTreeMap::new(), Vec::new(), 0u64);
        let part = inputs.par_iter().map(|v| classify_one(v)).reduce(empty, merge);
        let (counts, failures, no_match) =
            merge((std::mem::take(&mut report.counts), std::mem::take(&mut report.failures), report.no_match), part);
        report.counts = counts;
        report.failures = failures;
        report.no_match = no_match;
        done = end;
        if done < total {
            progress(&CensusReport { total: done, ..report.clone() });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf(q: u64) -> Gf {
        Gf::new(FieldSpec::parse_flag(&format!("gf{q}")).unwrap()).unwrap()
    }

    #[test]
    fn slots_and_nilpotency() {
        assert_eq!(parameter_slots(4).len(), 8);
        assert_eq!(parameter_slots(5).len(), 20);
        let f = gf(3);
        let l = presentation_algebra(&f, 4, &[1, 2, 1, 1, 2, 1, 0, 1]).unwrap();
        assert!(l.check_axioms().all_pass());
        assert!(l.central_series().is_nilpotent());
    }

    #[test]
    fn dim6_census() {
        let r = enumerate_and_classify(&gf(3), 3, CensusMode::Exhaustive).unwrap();
        assert_eq!(r.total, 9);
        assert_eq!(r.no_match, 0);
        assert_eq!(r.counts.keys().cloned().collect::<Vec<_>>(), ["A6", "P6(3,1)"]);
        assert_eq!(r.counts["A6"], 1);
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            enumerate_and_classify(&gf(3), 5, CensusMode::Exhaustive),
            Err(Error::TooLargeForExhaustive(_))
        ));
    }
}
