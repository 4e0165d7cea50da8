//! Invariants, branch discriminants, isomorphism search and classification
//! against the catalog.

pub mod branch;
pub mod census;
pub mod charsub;
pub mod fingerprint;
pub mod index;
pub mod iso;
pub mod oracle;

pub use branch::{tau_minpoly, type_abc, PencilReport, PencilType, TauClass, TauReport};
pub use census::{enumerate_and_classify, enumerate_with_progress, CensusMode, CensusReport};
pub use fingerprint::{fingerprint, Fingerprint};
pub use index::{classify, CatalogIndex, Classification};
pub use iso::{is_isomorphic, verify_witness, IsoReport, IsoWitness, Verdict};
pub use oracle::{orbit_oracle_dim4, OrbitCensus};
