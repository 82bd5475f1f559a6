//! Exact enumeration and counting of lattice points in Euclidean balls and
//! convex polytopes.

mod ball;
mod polytope;

pub use ball::{
    ball_volume, count_points_in_ball, points_in_ball, radius_for_volume, shortest_vector, Ball,
    BallEnumerator,
};
pub use polytope::{
    counterexample_body, hull_contains_lp, integer_points_in_polytope, lattice_points_in_polytope,
    VPolytope,
};
