//! Finite resource theories of knowledge.
//!
//! States of knowledge are nonempty sets of states ([`Specification`]);
//! transformations act element-wise ([`SpecMap`]) and are collected into
//! monoids ([`TransformationMonoid`]). On top of that sit embeddings and
//! lumpings, subsystem structure, approximation structures and exact
//! rational convex structures, each with brute-force oracles.

pub mod approx;
pub mod bits;
pub mod convex;
pub mod embed;
pub mod error;
pub mod gen;
pub mod laws;
pub mod locality;
pub mod oracle;
pub mod report;
pub mod spec;
pub mod theory;

pub use approx::{ApproxIndex, ApproximationStructure};
pub use bits::BitSet;
pub use embed::{GaloisInsertion, Lumping};
pub use error::{Error, Result};
pub use report::Report;
pub use spec::{SpecMap, Specification, StateSpace};
pub use theory::{ReachWitness, ResourceTheory, TransformationMonoid};
