//! Points, forms, and coherent sheaves on the projective line.

pub mod form;
pub mod point;
pub mod sequences;
pub mod sheaf;

pub use form::Form;
pub use point::{vanishing_form, LinearForm, P1Point};
pub use sequences::{
    koszul_sequence, local_cohomology_system, BundleMap, LocalCohomologySystem, TorsionChainMap,
    TorsionPresentation,
};
pub use sheaf::{ext1_skyscraper, h0_dim, h1_dim, tensor_torsion, CoherentSheaf, TorsionBlock, TorsionSheaf};
