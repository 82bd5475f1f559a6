use std::time::Instant;

use num_traits::One;
use serde_json::json;

use super::report::{ExperimentReport, Quantity, Relation};
use crate::enumeration::{
    self, ball_volume, counterexample_body, integer_points_in_polytope, lattice_points_in_polytope, Ball,
    VPolytope,
};
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeBasis, Subspace};
use crate::rational::{self, round12, Rational};
use crate::sumset::{minkowski_sum, PointSet};

/// Largest ambient dimension the sumset checks run at by default.
pub const DEFAULT_MAX_DIM: usize = 4;

/// Symmetric convex body for the doubling check.
#[derive(Clone, Debug)]
pub enum Body {
    Ball(Ball),
    Polytope(VPolytope),
}

impl Body {
    fn dim_ok(&self, n: usize) -> Result<()> {
        match self {
            Body::Ball(b) => match b.center() {
                Some(c) => c.check_dim(n),
                None => Ok(()),
            },
            Body::Polytope(p) if p.dim() == n => Ok(()),
            Body::Polytope(p) => Err(Error::DimensionMismatch { expected: n, got: p.dim() }),
        }
    }

    fn is_symmetric(&self) -> bool {
        match self {
            Body::Ball(b) => b.is_origin_centered(),
            Body::Polytope(p) => p.is_symmetric(),
        }
    }

    fn lattice_points(&self, basis: &LatticeBasis) -> Result<PointSet> {
        match self {
            Body::Ball(b) => enumeration::points_in_ball(basis, b),
            Body::Polytope(p) => lattice_points_in_polytope(basis, p),
        }
    }

    fn doubled(&self) -> Body {
        let two = rational::int(2);
        match self {
            Body::Ball(b) => Body::Ball(b.dilate(&two)),
            Body::Polytope(p) => Body::Polytope(p.dilate(&two)),
        }
    }

    fn describe(&self) -> serde_json::Value {
        match self {
            Body::Ball(b) => json!({ "ball": { "radius_sq": rational::to_json(b.radius_sq()) } }),
            Body::Polytope(p) => json!({ "polytope": p.to_json() }),
        }
    }
}

/// `|A+A| ≤ 5^n |A|` for `A = Λ ∩ B`, plus the containment `A+A ⊆ Λ ∩ 2B`.
pub fn check_claim1(basis: &LatticeBasis, body: &Body, max_dim: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    let n = basis.ambient_dim();
    if n > max_dim {
        return Err(Error::InvalidArgument(format!("dimension {n} exceeds the limit {max_dim}")));
    }
    body.dim_ok(n)?;
    if !body.is_symmetric() {
        return Err(Error::AsymmetricBody);
    }
    let a = body.lattice_points(basis)?;
    let aa = minkowski_sum(&a, &a)?;
    let doubled = body.doubled().lattice_points(basis)?;
    let contained = aa.is_subset(&doubled);
    let mut report = ExperimentReport::new(
        "claim1",
        json!({ "n": n, "body": body.describe() }),
        Quantity::Integer(aa.len() as u128),
        Relation::Le,
        Quantity::Integer(5u128.pow(n as u32) * a.len() as u128),
    )
    .with_details(json!({
        "size_a": a.len(),
        "size_aa": aa.len(),
        "size_lattice_2b": doubled.len(),
        "aa_within_lattice_2b": contained,
    }));
    report.pass &= contained;
    Ok(report.timed(start))
}

/// The hull of `(±N,0,0), (0,±N,1)` has `|A| = 4N+2` but `|A+A| ≥ (2N+1)²`.
pub fn check_nonsymmetric(big_n: u32) -> Result<ExperimentReport> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let start = Instant::now();
    let a = integer_points_in_polytope(&counterexample_body(big_n as i64));
    let aa = minkowski_sum(&a, &a)?;
    let expected_a = 4 * big_n as u128 + 2;
    let mut report = ExperimentReport::new(
        "nonsym",
        json!({ "N": big_n }),
        Quantity::Integer(aa.len() as u128),
        Relation::Ge,
        Quantity::Integer((2 * big_n as u128 + 1).pow(2)),
    )
    .with_details(json!({
        "size_a": a.len(),
        "expected_size_a": expected_a,
        "size_aa": aa.len(),
        "size_5n_bound": 125 * a.len() as u128,
    }));
    report.pass &= a.len() as u128 == expected_a;
    Ok(report.timed(start))
}

fn require_det_at_most_one(basis: &LatticeBasis) -> Result<()> {
    if basis.gram_det() > Rational::one() {
        return Err(Error::DeterminantTooLarge);
    }
    Ok(())
}

fn require_full_rank(basis: &LatticeBasis) -> Result<()> {
    if basis.rank() != basis.ambient_dim() {
        return Err(Error::Hypothesis("the lattice must have full rank".into()));
    }
    Ok(())
}

/// `|Λ ∩ B(r)| ≥ 2^{−n} vol(B(r))` for `det Λ ≤ 1`.
pub fn check_blichfeldt(basis: &LatticeBasis, r: &Rational) -> Result<ExperimentReport> {
    let start = Instant::now();
    require_full_rank(basis)?;
    require_det_at_most_one(basis)?;
    let n = basis.ambient_dim();
    let ball = Ball::new(r.clone())?;
    let count = enumeration::count_points_in_ball(basis, &ball)?;
    let rhs = ball_volume(n, rational::to_f64(r)) / 2f64.powi(n as i32);
    let report = ExperimentReport::new(
        "blichfeldt",
        json!({ "n": n, "r": rational::to_json(r) }),
        Quantity::Integer(count as u128),
        Relation::Ge,
        Quantity::Real(rhs),
    );
    Ok(report.timed(start))
}

/// `ln((3/2) exp(500 (ln n · r / (c₁ n^{1/4}))²))`.
pub fn corollary_ln_bound(n: usize, r: f64, c1: f64) -> f64 {
    let nf = n as f64;
    1.5f64.ln() + 500.0 * (nf.ln() * r / (c1 * nf.powf(0.25))).powi(2)
}

/// `|Λ ∩ W ∩ B(r)|` against the point-counting bound for half-dimensional
/// lattice subspaces. `expected_dim` defaults to `⌊n/2⌋`.
pub fn check_corollary_count(
    basis: &LatticeBasis,
    w: &Subspace,
    r: f64,
    c1_est: f64,
    expected_dim: Option<usize>,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let n = basis.ambient_dim();
    let want = expected_dim.unwrap_or(n / 2);
    if w.dim() != want {
        return Err(Error::Hypothesis(format!("dim W = {} but {want} is required", w.dim())));
    }
    if !(c1_est > 0.0) {
        return Err(Error::Hypothesis("c1 estimate must be positive".into()));
    }
    let threshold = c1_est * (n as f64).powf(0.25);
    if r < threshold {
        return Err(Error::Hypothesis(format!("r = {r} is below c1·n^(1/4) = {threshold}")));
    }
    let sub = lattice::sublattice_in_subspace(basis, w)?;
    let count = enumeration::count_points_in_ball(&sub, &Ball::from_radius_f64(r)?)?;
    let report = ExperimentReport::new(
        "corollary",
        json!({ "n": n, "dim_w": w.dim(), "r": round12(r), "c1": round12(c1_est) }),
        Quantity::Integer(count as u128),
        Relation::Le,
        Quantity::Ln(corollary_ln_bound(n, r, c1_est)),
    )
    .with_details(json!({ "sublattice_det": round12(sub.determinant().to_f64()) }));
    Ok(report.timed(start))
}

/// `|Λ ∩ B(n^{5/8})| ≥ n^{n/8}`, which the argument only needs for large `n`;
/// recorded without gating.
pub fn check_minkbound(basis: &LatticeBasis) -> Result<ExperimentReport> {
    let start = Instant::now();
    require_full_rank(basis)?;
    require_det_at_most_one(basis)?;
    let n = basis.ambient_dim();
    let ball = Ball::theorem_radius(n);
    let count = enumeration::count_points_in_ball(basis, &ball)?;
    let report = ExperimentReport::new(
        "minkbound",
        json!({ "n": n, "radius_sq": rational::to_json(ball.radius_sq()) }),
        Quantity::Integer(count as u128),
        Relation::Ge,
        Quantity::Real((n as f64).powf(n as f64 / 8.0)),
    )
    .non_gating("asymptotic bound: holds for n large enough, recorded only");
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;
    use crate::rational::int;

    #[test]
    fn claim1_examples() {
        let z2 = LatticeBasis::identity(2);
        let rep = check_claim1(&z2, &Body::Ball(Ball::new(int(2)).unwrap()), 4).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, Quantity::Integer(41));
        assert_eq!(rep.rhs, Quantity::Integer(325));

        let z3 = LatticeBasis::identity(3);
        let rep = check_claim1(&z3, &Body::Ball(Ball::new(int(1)).unwrap()), 4).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rhs, Quantity::Integer(125 * 7));

        for m in 1..6 {
            let seg = VPolytope::new(vec![Point::from_ints(&[-m]), Point::from_ints(&[m])]).unwrap();
            let rep = check_claim1(&LatticeBasis::identity(1), &Body::Polytope(seg), 4).unwrap();
            assert!(rep.pass);
            assert_eq!(rep.lhs, Quantity::Integer(4 * m as u128 + 1));
            assert_eq!(rep.rhs, Quantity::Integer(5 * (2 * m as u128 + 1)));
        }
    }

    #[test]
    fn claim1_rejects_asymmetric_or_large() {
        let off = Ball::new(int(1)).unwrap().with_center(Point::from_ints(&[1, 0]));
        assert!(matches!(
            check_claim1(&LatticeBasis::identity(2), &Body::Ball(off), 4),
            Err(Error::AsymmetricBody)
        ));
        let body = counterexample_body(2);
        assert!(matches!(
            check_claim1(&LatticeBasis::identity(3), &Body::Polytope(body), 4),
            Err(Error::AsymmetricBody)
        ));
        assert!(check_claim1(&LatticeBasis::identity(5), &Body::Ball(Ball::new(int(1)).unwrap()), 4).is_err());
    }

    #[test]
    fn nonsym_examples() {
        let rep = check_nonsymmetric(1).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.details["size_a"], json!(6));
        assert_eq!(rep.lhs, Quantity::Integer(19));
        let rep = check_nonsymmetric(5).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.details["size_a"], json!(22));
        assert!(check_nonsymmetric(0).is_err());
    }

    #[test]
    fn blichfeldt_examples() {
        let rep = check_blichfeldt(&LatticeBasis::identity(2), &int(2)).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, Quantity::Integer(13));
        let rep = check_blichfeldt(&LatticeBasis::identity(3), &int(2)).unwrap();
        assert_eq!(rep.lhs, Quantity::Integer(33));
        assert!((rep.rhs.as_f64() - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        let det2 = LatticeBasis::from_int_columns(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(check_blichfeldt(&det2, &int(1)), Err(Error::DeterminantTooLarge)));
    }

    #[test]
    fn corollary_examples() {
        let z4 = LatticeBasis::identity(4);
        let w = Subspace::new(vec![Point::unit(4, 0), Point::unit(4, 1)]).unwrap();
        let rep = check_corollary_count(&z4, &w, 2.0, 1.0, None).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, Quantity::Integer(13));
        assert!(check_corollary_count(&z4, &w, 1.0, 1.0, None).is_err());
        let w1 = Subspace::new(vec![Point::unit(4, 0)]).unwrap();
        assert!(check_corollary_count(&z4, &w1, 2.0, 1.0, None).is_err());
    }

    #[test]
    fn minkbound_examples() {
        let rep = check_minkbound(&LatticeBasis::identity(2)).unwrap();
        assert_eq!(rep.lhs, Quantity::Integer(9));
        assert!(rep.pass && !rep.gating);
        assert!(check_minkbound(&LatticeBasis::identity(3)).unwrap().pass);
        let det2 = LatticeBasis::from_int_columns(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(check_minkbound(&det2).is_err());
    }
}
