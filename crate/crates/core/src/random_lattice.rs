//! Seeded sampling of determinant-one lattices from the Goldstein–Mayer family,
//! Siegel mean-value validation of the sampler, and minimum normalized
//! sublattice determinants.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::enumeration::{self, radius_for_volume, Ball};
use crate::error::{Error, Result};
use crate::experiments::{ExperimentReport, Quantity, Relation};
use crate::lattice::{self, LatticeBasis, Point, Subspace};
use crate::rational::{self, Rational};

/// Smallest prime ≥ 10^6.
pub const DEFAULT_PRIME: u64 = 1_000_003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomLatticeConfig {
    pub n: usize,
    pub p: u64,
    pub seed: u64,
}

impl RandomLatticeConfig {
    pub fn new(n: usize, p: u64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("random lattices need n ≥ 2".into()));
        }
        if p < 101 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("modulus {p} must be a prime ≥ 101")));
        }
        Ok(RandomLatticeConfig { n, p, seed })
    }

    pub fn with_default_prime(n: usize, seed: u64) -> Result<Self> {
        Self::new(n, DEFAULT_PRIME, seed)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Independent RNG stream for `(seed, stream)`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A sampled lattice `s · L` with `L = {z ∈ Z^n : z ≡ t·v (mod p)}`.
#[derive(Clone, Debug)]
pub struct SampledLattice {
    /// LLL-reduced basis of `s · L`, determinant 1 up to the rational scale.
    pub basis: LatticeBasis,
    /// Basis of the integer lattice `L` (determinant `p^{n−1}`).
    pub integer_basis: LatticeBasis,
    pub v: Vec<u64>,
    /// Largest float-representable `s ≤ p^{−(n−1)/n}`, so `det ≤ 1`.
    pub scale: Rational,
}

pub fn sample_random_lattice(cfg: &RandomLatticeConfig) -> SampledLattice {
    sample_stream(cfg, 0)
}

/// Sample number `stream` of the family seeded by `cfg.seed`.
pub fn sample_stream(cfg: &RandomLatticeConfig, stream: u64) -> SampledLattice {
    let mut rng = trial_rng(cfg.seed, stream);
    sample_with_rng(cfg, &mut rng)
}

pub fn sample_with_rng(cfg: &RandomLatticeConfig, rng: &mut impl Rng) -> SampledLattice {
    let (n, p) = (cfg.n, cfg.p);
    let v: Vec<u64> = loop {
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&x| x != 0) {
            break v;
        }
    };
    // Normalize so that the first nonzero coordinate of the generator is 1.
    let j = v.iter().position(|&x| x != 0).expect("nonzero vector");
    let inv = pow_mod(v[j], p - 2, p);
    let w: Vec<i64> = v.iter().map(|&x| mul_mod(x, inv, p) as i64).collect();
    let cols: Vec<Point> = (0..n)
        .map(|i| {
            if i == j {
                Point::from_ints(&w)
            } else {
                let mut c = vec![0i64; n];
                c[i] = p as i64;
                Point::from_ints(&c)
            }
        })
        .collect();
    let integer_basis = LatticeBasis::new(cols).expect("Goldstein–Mayer basis has full rank");
    let reduced = lattice::lll_reduce(&integer_basis, &lattice::default_delta());
    let target = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(p), n - 1));
    let scale = rational::root_bound(&target, n as u32, false);
    let basis = reduced.scaled(&scale).expect("nonzero scale");
    SampledLattice { basis, integer_basis, v, scale }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiegelReport {
    pub n: usize,
    pub p: u64,
    pub seed: u64,
    pub volume: f64,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    /// `mean − volume`.
    pub deviation: f64,
    /// `|deviation| / stderr`.
    pub z: f64,
}

/// Mean number of nonzero lattice points in the origin ball of the given volume
/// over `trials` independent samples.
pub fn siegel_mean_value_check(
    cfg: &RandomLatticeConfig,
    region_volume: f64,
    trials: usize,
) -> Result<SiegelReport> {
    if trials < 100 {
        return Err(Error::InvalidArgument("Siegel check needs at least 100 trials".into()));
    }
    if !(region_volume.is_finite() && region_volume > 0.0) {
        return Err(Error::InvalidArgument("region volume must be positive".into()));
    }
    let ball = Ball::from_radius_f64(radius_for_volume(cfg.n, region_volume))?;
    let counts: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let lat = sample_stream(cfg, t);
            enumeration::count_points_in_ball(&lat.basis, &ball).expect("dimensions match") as f64 - 1.0
        })
        .collect();
    let m = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / m;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let stderr = (var / m).sqrt();
    let deviation = mean - region_volume;
    Ok(SiegelReport {
        n: cfg.n,
        p: cfg.p,
        seed: cfg.seed,
        volume: region_volume,
        trials,
        mean,
        stderr,
        deviation,
        z: if stderr > 0.0 { deviation.abs() / stderr } else if deviation == 0.0 { 0.0 } else { f64::INFINITY },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Provably the minimum over all lattice subspaces of this dimension.
    Exact,
    /// Minimum over a candidate family; an upper bound on the true minimum.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdetStatistic {
    pub dim_w: usize,
    /// `min det(Λ ∩ W)^{1/dim W}` over the examined subspaces.
    pub min_normalized_det: f64,
    pub candidates_examined: usize,
    pub regime: Regime,
}

fn normalized(gram_det: &Rational, k: usize) -> f64 {
    rational::to_f64(gram_det).powf(0.5 / k as f64)
}

/// Subsets of `0..n` of size `k`, at most `limit` of them.
fn subsets(n: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, limit: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, limit, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, limit, &mut cur, &mut out);
    out
}

/// Up to `count` shortest nonzero lattice vectors (one of each `±v` pair),
/// shortest first.
pub fn short_vectors(basis: &LatticeBasis, count: usize) -> Vec<Point> {
    let reduced = lattice::lll_reduce(basis, &lattice::default_delta());
    let r2 = reduced.columns().iter().map(Point::norm_sq).max().expect("nonempty");
    let mut ball = Ball::from_radius_sq(r2).expect("positive");
    loop {
        let pts = enumeration::points_in_ball(&reduced, &ball).expect("dimensions match");
        let mut half: Vec<(Rational, Point)> = pts
            .iter()
            .filter(|p| !p.is_zero() && **p > -*p)
            .map(|p| (p.norm_sq(), p.clone()))
            .collect();
        if half.len() >= count || pts.len() > 50_000 {
            half.sort();
            return half.into_iter().take(count).map(|(_, p)| p).collect();
        }
        ball = ball.dilate(&rational::ratio(3, 2));
    }
}

const MAX_SUBSETS: usize = 20_000;

/// Minimum normalized determinant `det(Λ ∩ W)^{1/dim W}` over lattice subspaces
/// of dimension `dim_w`. Exact for `dim_w ∈ {1, d−1, d}` (shortest vector,
/// shortest dual vector, whole lattice); otherwise a search over subspaces
/// spanned by the reduced basis and `effort` short vectors.
pub fn min_subdet_statistics(basis: &LatticeBasis, dim_w: usize, effort: usize) -> Result<SubdetStatistic> {
    let d = basis.rank();
    if dim_w == 0 || dim_w > d {
        return Err(Error::InvalidArgument(format!("dim_w must lie in 1..={d}")));
    }
    if dim_w == d {
        return Ok(SubdetStatistic {
            dim_w,
            min_normalized_det: normalized(&basis.gram_det(), d),
            candidates_examined: 1,
            regime: Regime::Exact,
        });
    }
    if dim_w == 1 {
        let (_, n2) = enumeration::shortest_vector(basis);
        return Ok(SubdetStatistic {
            dim_w,
            min_normalized_det: rational::to_f64(&n2).sqrt(),
            candidates_examined: 1,
            regime: Regime::Exact,
        });
    }
    if dim_w == d - 1 {
        // det(Λ ∩ W) = det(Λ) · ‖primitive dual vector orthogonal to W‖.
        let (_, dual_n2) = enumeration::shortest_vector(&basis.dual());
        let gram_det = basis.gram_det() * dual_n2;
        return Ok(SubdetStatistic {
            dim_w,
            min_normalized_det: normalized(&gram_det, dim_w),
            candidates_examined: 1,
            regime: Regime::Exact,
        });
    }
    let reduced = lattice::lll_reduce(basis, &lattice::default_delta());
    let mut cands: Vec<Point> = reduced.columns().to_vec();
    for v in short_vectors(basis, effort) {
        if !cands.contains(&v) && !cands.contains(&-&v) {
            cands.push(v);
        }
    }
    let mut best: Option<f64> = None;
    let mut examined = 0;
    for s in subsets(cands.len(), dim_w, MAX_SUBSETS) {
        let Ok(w) = Subspace::new(s.iter().map(|&i| cands[i].clone()).collect()) else {
            continue;
        };
        let sub = lattice::sublattice_in_subspace(basis, &w)?;
        examined += 1;
        let v = normalized(&sub.gram_det(), dim_w);
        best = Some(best.map_or(v, |b: f64| b.min(v)));
    }
    Ok(SubdetStatistic {
        dim_w,
        min_normalized_det: best.expect("reduced basis spans a subspace of every dimension"),
        candidates_examined: examined,
        regime: Regime::Heuristic,
    })
}

/// `R = min over all dimensions` of [`min_subdet_statistics`], with whether
/// every dimension was exact.
pub fn min_normalized_subdeterminant(basis: &LatticeBasis, effort: usize) -> Result<(f64, Regime)> {
    let mut r = f64::INFINITY;
    let mut regime = Regime::Exact;
    for k in 1..=basis.rank() {
        let s = min_subdet_statistics(basis, k, effort)?;
        r = r.min(s.min_normalized_det);
        if s.regime == Regime::Heuristic {
            regime = Regime::Heuristic;
        }
    }
    Ok((r, regime))
}

/// `ln((3/2) exp(500 (ln n · r/R)²))`.
pub fn reverse_minkowski_ln_bound(n: usize, r: f64, big_r: f64) -> f64 {
    1.5f64.ln() + 500.0 * ((n as f64).ln() * r / big_r).powi(2)
}

/// Point count in the ball of radius `r` against the reverse Minkowski bound
/// with `R` the minimum normalized sublattice determinant.
pub fn check_reverse_minkowski(basis: &LatticeBasis, r: f64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let n = basis.ambient_dim();
    if n < 2 {
        return Err(Error::Hypothesis("reverse Minkowski needs n ≥ 2".into()));
    }
    let (big_r, regime) = min_normalized_subdeterminant(basis, 2 * n)?;
    if r < big_r {
        return Err(Error::RadiusBelowHypothesis);
    }
    let count = enumeration::count_points_in_ball(basis, &Ball::from_radius_f64(r)?)?;
    let ln_bound = reverse_minkowski_ln_bound(n, r, big_r);
    let mut report = ExperimentReport::new(
        "reverse_minkowski",
        json!({ "n": n, "r": rational::round12(r), "R": rational::round12(big_r), "regime": regime }),
        Quantity::Integer(count as u128),
        Relation::Le,
        Quantity::Ln(ln_bound),
    );
    report.details = json!({ "ln_lhs": rational::round12((count as f64).ln()), "ln_slack": rational::round12(ln_bound - (count as f64).ln()) });
    if !report.pass && regime == Regime::Heuristic {
        report.note = Some("inconclusive: heuristic R is an upper bound on the true minimum".into());
        report.gating = false;
    }
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(101));
        assert!(is_prime(DEFAULT_PRIME));
        assert!(!is_prime(1_000_001));
        assert_eq!(next_prime(1_000_000), DEFAULT_PRIME);
        assert_eq!(next_prime(100_000), 100_003);
        assert!(RandomLatticeConfig::new(3, 100, 1).is_err());
        assert!(RandomLatticeConfig::new(3, 1_000_001, 1).is_err());
        assert!(RandomLatticeConfig::new(1, 101, 1).is_err());
    }

    #[test]
    fn sampler_normalization_and_determinism() {
        for n in 2..=5 {
            let cfg = RandomLatticeConfig::with_default_prime(n, 11).unwrap();
            let a = sample_random_lattice(&cfg);
            let det = a.basis.determinant();
            assert!(det.upper <= rational::int(1));
            assert!(rational::to_f64(&det.lower) >= 1.0 - 1e-9);
            let b = sample_random_lattice(&cfg);
            assert_eq!(a.basis, b.basis);
            assert_eq!(
                a.integer_basis.gram_det(),
                Rational::from_integer(num_traits::pow(BigInt::from(cfg.p), 2 * (n - 1)))
            );
        }
    }

    #[test]
    fn generator_is_in_integer_lattice() {
        let cfg = RandomLatticeConfig::new(2, 101, 42).unwrap();
        let s = sample_random_lattice(&cfg);
        let v: Vec<i64> = s.v.iter().map(|&x| x as i64).collect();
        assert!(s.integer_basis.contains(&Point::from_ints(&v)).unwrap());
        let mut v2 = v.clone();
        v2[0] += 1;
        assert!(!s.integer_basis.contains(&Point::from_ints(&v2)).unwrap());
    }

    #[test]
    fn subdet_examples() {
        for k in 1..=4 {
            let s = min_subdet_statistics(&LatticeBasis::identity(4), k, 8).unwrap();
            assert!((s.min_normalized_det - 1.0).abs() < 1e-12, "k={k}");
        }
        let l = LatticeBasis::new(vec![
            Point::new(vec![rational::ratio(1, 2), rational::int(0)]),
            Point::new(vec![rational::int(0), rational::int(2)]),
        ])
        .unwrap();
        let s = min_subdet_statistics(&l, 1, 4).unwrap();
        assert_eq!(s.min_normalized_det, 0.5);
        assert_eq!(s.regime, Regime::Exact);
        assert!(min_subdet_statistics(&l, 3, 4).is_err());
    }

    #[test]
    fn reverse_minkowski_examples() {
        let rep = check_reverse_minkowski(&LatticeBasis::identity(2), 1.0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, Quantity::Integer(5));
        let rep = check_reverse_minkowski(&LatticeBasis::identity(3), 1.5).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, Quantity::Integer(19));
        assert!(matches!(
            check_reverse_minkowski(&LatticeBasis::identity(3), 0.5),
            Err(Error::RadiusBelowHypothesis)
        ));
    }

    #[test]
    fn siegel_rejects_few_trials() {
        let cfg = RandomLatticeConfig::new(3, 100_003, 1).unwrap();
        assert!(siegel_mean_value_check(&cfg, 1.0, 0).is_err());
        assert!(siegel_mean_value_check(&cfg, 1.0, 99).is_err());
    }
}
