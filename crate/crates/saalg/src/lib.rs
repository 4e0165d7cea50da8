//! Exact computation with symplectic alternating algebras: structure theory,
//! the classification of nilpotent algebras of dimension at most 10, and
//! the correspondence with powerful 2-Engel 3-groups.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod engel;
pub mod error;
pub mod field;
pub mod linalg;
pub mod saa_core;

pub use error::{Error, Result};
