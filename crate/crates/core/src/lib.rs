//! Coherence-preserving right-exact functors from sheaves on the projective
//! line to vector spaces, represented by their values on a finite window of
//! line bundles, together with their structure decomposition.

pub mod corpus;
pub mod error;
pub mod format;
pub mod functor;
pub mod linalg;
pub mod sheaves;
pub mod structure;
pub mod watts;

pub use error::{Error, Result};
