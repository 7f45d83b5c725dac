//! The structure theorem as an algorithm, and the classifications it yields.

pub mod classify;
pub mod decompose;
pub mod properties;

pub use classify::{exact_on_koszul_battery, is_integral_transform, is_pullback, Mode};
pub use decompose::{
    build_h1_isomorphism, build_splitting, decompose, h1_multiplicities_from_dims, Decomposition, H1Isomorphism,
    SplittingCertificate,
};
pub use properties::{check_rq_lemma, run_property_suite, PropertyEntry, PropertyReport, Status};
