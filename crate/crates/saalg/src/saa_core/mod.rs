//! Symplectic alternating algebras: construction, products, axioms and the
//! structure theory of the nilpotent case.

pub mod algebra;
pub mod presentation;
pub mod structure;

pub use algebra::{AxiomReport, SAAlgebra};
pub use presentation::{Presentation, Triple};
pub use structure::{CenterInfo, CentralSeries, DirectSplit, IdealInfo, IdentityProbe};
