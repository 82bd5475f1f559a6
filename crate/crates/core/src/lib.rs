//! Exact computation of lattice-point counts, Minkowski sumsets and
//! intersections of lattice point sets with generalized arithmetic
//! progressions, together with the checks that tie them to the small-doubling
//! inequalities they illustrate.

pub mod enumeration;
pub mod error;
pub mod experiments;
pub mod gap;
pub mod lattice;
pub mod random_lattice;
pub mod rational;
pub mod sumset;

pub use error::{Error, Result};
pub use lattice::{LatticeBasis, Point, Subspace};
pub use rational::Rational;
pub use sumset::PointSet;
