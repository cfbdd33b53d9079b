//! Exact rational matrices and subspace calculus.
//!
//! Everything here is computed over `Q`: spans are held in a canonical
//! reduced echelon basis, projectors are built from an unnormalized
//! Gram-Schmidt basis, and definiteness is decided by rational `LDL'`.

mod matrix;
mod reduce;
mod subspace;

pub use matrix::{dot, integer_scale_vector, parse_rat, rat, rat_to_f64, ratio, Rat, RatMatrix};
pub use subspace::{colspace, is_nnd, nullspace, projector, rank, solve, trace, Projector, Subspace};
