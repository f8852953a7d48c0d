//! Fuzzy conceptual spaces.
//!
//! Concepts are fuzzy sets whose core is a union of axis-parallel cuboids
//! sharing a non-empty central region. Membership decays exponentially with
//! the combined distance to the core, where the combined distance is
//! Euclidean inside a domain and a weighted Manhattan sum across domains.
//!
//! The crate computes, in closed form where one exists:
//!
//! - the size (measure) of a concept, via hyperball volumes of α-cuts and
//!   inclusion-exclusion over the core's cuboids ([`measure`]),
//! - subsethood, implication, similarity and betweenness of concepts
//!   ([`relations`]),
//!
//! and ships a seeded Monte-Carlo integrator ([`oracle`]) that checks the
//! closed forms independently and evaluates the overlap integrals that have
//! no closed form.
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental
//! functions go through `libm`, so results are bit-identical across
//! platforms.
#![no_std]
#![deny(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod concept;
mod error;
pub mod geometry;
pub mod measure;
pub mod numeric;
pub mod oracle;
pub mod relations;

pub use concept::{Concept, Core, Cuboid};
pub use error::{Error, Result};
pub use geometry::{DomainSet, DomainStructure, Point, WeightSet};
pub use measure::Limits;
