//! Finite presentations and the constructions around profinite completions:
//! Rips and fibre products, universal central extensions, the J-construction,
//! tubular bundles, and exact epimorphism counting onto small simple groups.

pub mod constructions;
pub mod error;
pub mod homology;
pub mod pipeline;
pub mod finite_quotients;
pub mod presentations;

pub use error::{Error, Result};
