//! Hecke eigenvalues of quaternionic modular forms on Shimura curves over
//! totally real fields, computed exactly from fundamental domains and group
//! cohomology.

pub mod arith;
pub mod cohomology;
pub mod error;
pub mod field;
pub mod fuchsian;
pub mod hecke;
pub mod pipeline;
pub mod quat;
pub mod spectral;

pub use arith::ring::{Int, Rat};
pub use cohomology::{CoeffField, El};
pub use error::{Error, Result};
pub use field::{FieldElement, FracIdeal, NumberField, PrimeIdeal};
pub use hecke::{ComponentSystem, OperatorKind, OperatorMatrix};
pub use pipeline::config::JobConfig;
pub use pipeline::document::ResultDocument;
pub use pipeline::{run, RunOutput};
pub use quat::{QuatAlgebra, QuatElement, QuatLattice};
