//! Functors represented by their values on a window of line bundles.

pub mod data;
pub mod evaluate;
pub mod generators;

pub use data::{gauge_scramble, gauge_scramble_with_witness, random_invertible, FunctorData, Violation};
pub use evaluate::{
    apply_bundle_map, apply_to_torsion_map, check_exactness_on_ses, evaluate_on_sheaf, SesOfBundles, SheafValue,
};
pub use generators::{generator_h0_torsion, generator_h1, generator_rq, h1_dim_at};
