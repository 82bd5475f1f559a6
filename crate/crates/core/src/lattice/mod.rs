//! Exact lattices: bases, Gram matrices, determinants, LLL reduction,
//! membership and sublattices cut out by subspaces.

mod basis;
pub mod hnf;
pub mod linalg;
mod lll;
mod point;
mod sublattice;

pub use basis::{determinant, gram, membership, Determinant, LatticeBasis};
pub use lll::{default_delta, is_lll_reduced, lll_reduce, lll_reduce_with_transform, GramSchmidt, LllOutput};
pub use point::{Point, Subspace};
pub use sublattice::{lattice_in_span, sublattice_in_subspace, AffineSlicer};
