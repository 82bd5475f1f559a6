//! Per-instance verification of the covering argument: a GAP is split into
//! restrictions along its shortest dimensions and each inequality of the
//! resulting chain is checked exactly.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Pow;
use serde_json::json;

use super::report::{ExperimentReport, Quantity, Relation};
use crate::enumeration::{self, Ball, BallEnumerator};
use crate::error::{Error, Result};
use crate::gap::{self, Gap, GapMembership};
use crate::lattice::{self, linalg, AffineSlicer, LatticeBasis, Point};
use crate::rational::{round12, Rational};
use crate::sumset::PointSet;

/// Lattice, ball and `A = Λ ∩ ball`, shared across many GAPs.
pub struct ProofChainContext {
    basis: LatticeBasis,
    reduced: LatticeBasis,
    ball: Ball,
    a: PointSet,
}

impl ProofChainContext {
    pub fn new(basis: &LatticeBasis, ball: &Ball) -> Result<Self> {
        if !ball.is_origin_centered() {
            return Err(Error::InvalidArgument("the ball must be centered at the origin".into()));
        }
        let a = enumeration::points_in_ball(basis, ball)?;
        Ok(ProofChainContext {
            basis: basis.clone(),
            reduced: lattice::lll_reduce(basis, &lattice::default_delta()),
            ball: ball.clone(),
            a,
        })
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn points(&self) -> &PointSet {
        &self.a
    }

    /// The first `free` generators padded with reduced basis vectors up to
    /// dimension `target` (or as far as the lattice allows).
    fn subspace_spanning(&self, g: &Gap, free: usize, target: usize) -> Vec<Point> {
        let mut span: Vec<Point> = g.gens()[..free].to_vec();
        let mut rank = linalg::rank(&coords(&span));
        for b in self.reduced.columns() {
            if rank >= target {
                break;
            }
            span.push(b.clone());
            let r = linalg::rank(&coords(&span));
            if r > rank {
                rank = r;
            } else {
                span.pop();
            }
        }
        span
    }

    /// One report per link of the chain.
    pub fn check(&self, g: &Gap, cut: usize) -> Result<Vec<ExperimentReport>> {
        let start = Instant::now();
        let n = self.basis.ambient_dim();
        g.x0().check_dim(n)?;
        let d = g.rank();
        if !gap::is_sorted_nonincreasing(g) {
            return Err(Error::InvalidGap("dimensions must be sorted by non-increasing side length".into()));
        }
        if cut == 0 || cut > d + 1 {
            return Err(Error::InvalidArgument(format!("cut {cut} outside 1..={}", d + 1)));
        }
        let size_g = gap::gap_size_multiset(g);
        if size_g > gap::DEFAULT_ENUMERATION_CAP {
            return Err(Error::GapTooLarge { size: size_g, cap: gap::DEFAULT_ENUMERATION_CAP });
        }
        let free = cut - 1;
        let restrictions = gap::restrictions(g, cut)?;
        let a = &self.a;
        let whole = gap::intersect_count(a, g)?;

        // |A ∩ G_t| for every t.
        let slice_counts: Vec<usize> = match GapMembership::new(g) {
            Some(m) => {
                let mut by_t: HashMap<Vec<i64>, usize> = HashMap::new();
                for p in a.iter() {
                    if let Some(alpha) = m.coefficients(p) {
                        *by_t.entry(alpha[free..].to_vec()).or_default() += 1;
                    }
                }
                restrictions.iter().map(|(t, _)| by_t.get(t).copied().unwrap_or(0)).collect()
            }
            None => restrictions
                .iter()
                .map(|(_, gt)| gap::intersect_count(a, gt))
                .collect::<Result<_>>()?,
        };
        let sum_slices: u128 = slice_counts.iter().map(|&c| c as u128).sum();
        let max_slice = slice_counts.iter().copied().max().unwrap_or(0);

        let inputs = json!({
            "n": n,
            "d": d,
            "cut": cut,
            "size_a": a.len(),
            "size_g": size_g.to_string(),
        });
        let mut reports = Vec::with_capacity(6);

        reports.push(ExperimentReport::new(
            "proofchain.subadditivity",
            inputs.clone(),
            Quantity::Integer(whole as u128),
            Relation::Le,
            Quantity::Integer(sum_slices),
        ));

        // Affine form: A ∩ G_t ⊆ Λ ∩ (base_t + W) ∩ ball.
        let target = cut.min(n);
        let spanning = self.subspace_spanning(g, free, target);
        let slicer = AffineSlicer::new(&self.basis, &spanning)?;
        let mut cache: HashMap<Point, u64> = HashMap::new();
        let (mut slab_total, mut violations, mut checked) = (0u128, 0usize, 0usize);
        for ((_, gt), &count) in restrictions.iter().zip(&slice_counts) {
            if count == 0 {
                continue;
            }
            checked += 1;
            let slab = match slicer.coset_point(gt.x0())? {
                None => 0,
                Some(y0) => match cache.get(&y0) {
                    Some(&c) => c,
                    None => {
                        let c = self.slab_count(&slicer, &y0)?;
                        cache.insert(y0, c);
                        c
                    }
                },
            };
            slab_total += slab as u128;
            if count as u64 > slab {
                violations += 1;
            }
        }
        let mut slab_report = ExperimentReport::new(
            "proofchain.slice_in_subspace",
            inputs.clone(),
            Quantity::Integer(sum_slices),
            Relation::Le,
            Quantity::Integer(slab_total),
        )
        .with_details(json!({
            "dim_w": linalg::rank(&coords(&spanning)),
            "slices_checked": checked,
            "violations": violations,
        }));
        slab_report.pass &= violations == 0;
        reports.push(slab_report);

        let tail: BigInt = g.side_lengths()[free..].iter().map(|&s| BigInt::from(s)).product();
        let multiset_total: u128 = restrictions.iter().map(|(_, gt)| gap::gap_size_multiset(gt)).sum();
        let mut telescoping = ExperimentReport::new(
            "proofchain.telescoping",
            inputs.clone(),
            Quantity::Integer(multiset_total),
            Relation::Eq,
            Quantity::Integer(size_g),
        )
        .with_details(json!({ "restrictions": restrictions.len(), "tail_product": tail.to_string() }));
        telescoping.pass &= BigInt::from(restrictions.len()) == tail;
        reports.push(telescoping);

        // tail^d ≤ |G|^{d−cut+1}, exact; with d = 0 both sides are 1.
        let exponent = if d == 0 { 1.0 } else { 1.0 - free as f64 / d as f64 };
        let sorted_ok = if d == 0 {
            true
        } else {
            Pow::pow(&tail, d as u32) <= Pow::pow(BigInt::from(size_g), (d - free) as u32)
        };
        let tail_u128: u128 = tail.to_string().parse().unwrap_or(u128::MAX);
        let mut sorted_report = ExperimentReport::new(
            "proofchain.sorted_product",
            inputs.clone(),
            Quantity::Integer(tail_u128),
            Relation::Le,
            Quantity::Real((size_g as f64).powf(exponent)),
        );
        sorted_report.pass = sorted_ok;
        reports.push(sorted_report);

        let two_n = 2u128.pow(n as u32);
        reports.push(
            ExperimentReport::new(
                "proofchain.slice_bound",
                inputs.clone(),
                Quantity::Integer(max_slice as u128),
                Relation::Le,
                Quantity::Integer(two_n),
            )
            .non_gating("needs the reverse Minkowski count in dimension n/2; asymptotic"),
        );
        reports.push(
            ExperimentReport::new(
                "proofchain.final",
                inputs,
                Quantity::Integer(whole as u128),
                Relation::Le,
                Quantity::Real(round12(two_n as f64 * (a.len() as f64).powf(exponent))),
            )
            .non_gating("follows from the asymptotic slice bound; recorded only"),
        );

        let elapsed = start.elapsed().as_millis() as u64;
        for r in &mut reports {
            r.runtime_ms = elapsed;
        }
        Ok(reports)
    }

    /// `|Λ ∩ (y0 + W) ∩ ball|` for a lattice point `y0`.
    fn slab_count(&self, slicer: &AffineSlicer, y0: &Point) -> Result<u64> {
        match slicer.sublattice() {
            None => Ok(u64::from(self.ball.contains(y0))),
            Some(sub) => {
                let shifted = Ball::from_radius_sq(self.ball.radius_sq().clone())?.with_center(-y0);
                Ok(BallEnumerator::new(sub, &shifted)?.count())
            }
        }
    }
}

fn coords(points: &[Point]) -> Vec<Vec<Rational>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

/// Builds `A = Λ ∩ ball` and runs every link for a single GAP.
pub fn check_proof_chain(basis: &LatticeBasis, ball: &Ball, g: &Gap, cut: usize) -> Result<Vec<ExperimentReport>> {
    ProofChainContext::new(basis, ball)?.check(g, cut)
}
