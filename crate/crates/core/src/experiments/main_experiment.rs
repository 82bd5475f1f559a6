use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::proof_chain::ProofChainContext;
use super::report::{ExperimentReport, Quantity};
use crate::enumeration::Ball;
use crate::error::{Error, Result};
use crate::gap::{self, Gap};
use crate::lattice::{LatticeBasis, Point};
use crate::random_lattice::{sample_random_lattice, trial_rng, RandomLatticeConfig};
use crate::rational::{self, round12};
use crate::sumset::PointSet;

/// Largest dimension the main experiment accepts.
pub const MAX_MAIN_DIM: usize = 6;

const MAX_GAP_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct MainSummary {
    pub n: usize,
    pub p: u64,
    pub seed: u64,
    pub c: f64,
    pub gaps: usize,
    pub size_a: usize,
    pub radius_sq: serde_json::Value,
    pub max_ratio: f64,
    pub max_ratio_gap: Option<usize>,
    pub max_intersection: usize,
    /// Per-link count of passing instances.
    pub link_passes: BTreeMap<String, usize>,
    pub gating_failures: usize,
    pub reference_bound: f64,
    pub reference_asserted: bool,
    pub reference_note: String,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainExperiment {
    pub summary: MainSummary,
    #[serde(skip)]
    pub reports: Vec<ExperimentReport>,
}

/// Geometric on `{1, 2, ...}` with mean 4.
fn side_length(rng: &mut impl Rng) -> i64 {
    let mut s = 1;
    while s < 64 && rng.gen_bool(0.75) {
        s += 1;
    }
    s
}

fn generator(rng: &mut impl Rng, basis: &LatticeBasis) -> Point {
    let n = basis.ambient_dim();
    loop {
        let p = if rng.gen_bool(0.5) {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            Point::from_ints(&c)
        } else {
            let c: Vec<i64> = (0..basis.rank()).map(|_| rng.gen_range(-1..=1)).collect();
            basis.point_i64(&c)
        };
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random GAP with `d ≤ max_d` and `|G| ≤ limit`, sorted by side length and
/// based at a point of `a`.
pub fn random_gap(rng: &mut impl Rng, basis: &LatticeBasis, a: &PointSet, max_d: usize, limit: u128) -> Gap {
    let n = basis.ambient_dim();
    let x0 = if a.is_empty() {
        Point::zero(n)
    } else {
        a.points()[rng.gen_range(0..a.len())].clone()
    };
    for _ in 0..MAX_GAP_ATTEMPTS {
        let d = rng.gen_range(0..=max_d);
        let sides: Vec<i64> = (0..d).map(|_| side_length(rng)).collect();
        let size: u128 = sides.iter().map(|&s| s as u128).product();
        if size > limit {
            continue;
        }
        let gens = (0..d).map(|_| generator(rng, basis)).collect();
        let lo: Vec<i64> = sides.iter().map(|&s| -rng.gen_range(0..s)).collect();
        let hi = lo.iter().zip(&sides).map(|(l, s)| l + s - 1).collect();
        let g = Gap::new(x0.clone(), gens, lo, hi).expect("consistent bounds");
        return gap::sort_dims_nonincreasing(&g);
    }
    Gap::singleton(x0)
}

/// Samples a lattice, takes `A = Λ ∩ B(n^{5/8})` and runs the proof chain over a
/// seeded family of random GAPs with `d ≤ cn` and `|G| ≤ |A|`.
pub fn run_main_experiment(cfg: &RandomLatticeConfig, gap_family_size: usize, c: f64) -> Result<MainExperiment> {
    let start = Instant::now();
    let n = cfg.n;
    if n > MAX_MAIN_DIM {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds the limit {MAX_MAIN_DIM}")));
    }
    if !(c >= 1.0) {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    let sample = sample_random_lattice(cfg);
    let ball = Ball::theorem_radius(n);
    let ctx = ProofChainContext::new(&sample.basis, &ball)?;
    let a = ctx.points();
    let max_d = (c * n as f64).floor() as usize;
    let limit = a.len().max(1) as u128;
    let default_cut = n.div_ceil(2);

    let per_gap: Vec<(usize, Vec<ExperimentReport>)> = (0..gap_family_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, 1 + i as u64);
            let g = random_gap(&mut rng, &sample.basis, a, max_d, limit);
            let cut = default_cut.min(g.rank() + 1);
            let mut reports = ctx.check(&g, cut)?;
            let whole = match reports[0].lhs {
                Quantity::Integer(k) => k as usize,
                _ => unreachable!("subadditivity is an integer report"),
            };
            for r in &mut reports {
                r.seed = cfg.seed;
                if let Some(obj) = r.inputs.as_object_mut() {
                    obj.insert("gap_index".into(), json!(i));
                }
            }
            Ok((whole, reports))
        })
        .collect::<Result<_>>()?;

    let mut link_passes = BTreeMap::new();
    let mut gating_failures = 0;
    let (mut max_intersection, mut max_ratio_gap) = (0usize, None);
    let mut reports = Vec::with_capacity(per_gap.len() * 6);
    for (i, (whole, rs)) in per_gap.into_iter().enumerate() {
        if max_ratio_gap.is_none() || whole > max_intersection {
            max_intersection = whole;
            max_ratio_gap = Some(i);
        }
        for r in rs {
            *link_passes.entry(r.name.clone()).or_insert(0) += usize::from(r.pass);
            gating_failures += usize::from(!r.ok());
            reports.push(r);
        }
    }
    let max_ratio = if a.is_empty() { 0.0 } else { max_intersection as f64 / a.len() as f64 };
    let summary = MainSummary {
        n,
        p: cfg.p,
        seed: cfg.seed,
        c,
        gaps: gap_family_size,
        size_a: a.len(),
        radius_sq: rational::to_json(ball.radius_sq()),
        max_ratio: round12(max_ratio),
        max_ratio_gap,
        max_intersection,
        link_passes,
        gating_failures,
        reference_bound: round12((n as f64).powf(-(n as f64) / (25.0 * c))),
        reference_asserted: false,
        reference_note: "asymptotic bound, not asserted at this n".into(),
        pass: gating_failures == 0,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    Ok(MainExperiment { summary, reports })
}
