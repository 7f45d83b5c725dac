//! Exact linear algebra over the rationals and prime fields.

pub mod colimit;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod scalar;
pub mod subspace;

pub use colimit::{colimit_sequence, Colimit, MapSequence};
pub use matrix::Matrix;
pub use pencil::{pencil_weierstrass, PencilBlock, PencilDecomposition};
pub use poly::Poly;
pub use scalar::{Field, Scalar};
pub use subspace::{complement, kernel_basis, Subspace};
