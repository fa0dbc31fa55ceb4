//! Nonparallel packings of congruent infinite cylinders: point sets, axis
//! constructions, exact and numeric certificates, and density estimates.

pub mod certifier;
pub mod density;
pub mod error;
pub mod line_families;
pub mod point_lattice;
pub mod rng;
pub mod vec_geometry;

pub use error::{Error, Result};
