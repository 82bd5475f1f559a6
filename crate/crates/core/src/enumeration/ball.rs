use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, GramSchmidt, LatticeBasis, Point};
use crate::rational::{self, Rational};
use crate::sumset::PointSet;

/// Closed Euclidean ball `{x : ‖x − center‖² ≤ radius²}` with an exact squared
/// radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    radius_sq: Rational,
    center: Option<Point>,
}

impl Ball {
    pub fn new(radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidArgument("ball radius must be positive".into()));
        }
        Ok(Ball { radius_sq: &radius * &radius, center: None })
    }

    pub fn from_radius_sq(radius_sq: Rational) -> Result<Self> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidArgument("ball radius must be positive".into()));
        }
        Ok(Ball { radius_sq, center: None })
    }

    /// Uses the exact binary value of `radius`.
    pub fn from_radius_f64(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!("bad radius {radius}")));
        }
        Self::new(rational::from_f64(radius))
    }

    /// Radius `n^{5/8}`: the squared radius is the smallest float-representable
    /// rational `q` with `q⁴ ≥ n⁵`, so the ball contains the true one.
    pub fn theorem_radius(n: usize) -> Self {
        let target = rational::pow(&rational::int(n as i64), 5);
        Ball { radius_sq: rational::root_bound(&target, 4, true), center: None }
    }

    pub fn with_center(mut self, center: Point) -> Self {
        self.center = if center.is_zero() { None } else { Some(center) };
        self
    }

    pub fn radius_sq(&self) -> &Rational {
        &self.radius_sq
    }

    pub fn radius_f64(&self) -> f64 {
        rational::to_f64(&self.radius_sq).sqrt()
    }

    pub fn center(&self) -> Option<&Point> {
        self.center.as_ref()
    }

    pub fn is_origin_centered(&self) -> bool {
        self.center.is_none()
    }

    /// Ball with the radius multiplied by `k` (same center).
    pub fn dilate(&self, k: &Rational) -> Self {
        Ball { radius_sq: &self.radius_sq * k * k, center: self.center.clone() }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let d = match &self.center {
            Some(c) => (p - c).norm_sq(),
            None => p.norm_sq(),
        };
        d <= self.radius_sq
    }
}

/// Lattice columns and center written as `scale · (integer vectors)` so the
/// exact inside-test runs on machine integers.
struct IntegerFrame {
    /// `numer/denom` scale factor.
    scale_numer: BigInt,
    scale_denom: BigInt,
    /// `cols[j][i]`: coordinate `i` of column `j`.
    cols: Vec<Vec<BigInt>>,
    center: Vec<BigInt>,
    /// Inside iff `‖Y x − Yc‖² ≤ threshold`.
    threshold: BigInt,
    small: Option<SmallFrame>,
}

struct SmallFrame {
    cols: Vec<Vec<i64>>,
    center: Vec<i64>,
    threshold: i128,
}

impl IntegerFrame {
    fn new(basis: &LatticeBasis, center: Option<&Point>, radius_sq: &Rational) -> Self {
        let n = basis.ambient_dim();
        let zero = Point::zero(n);
        let center = center.unwrap_or(&zero);
        let all = basis
            .columns()
            .iter()
            .chain(std::iter::once(center))
            .flat_map(|p| p.coords());
        let den = rational::common_denominator(all.clone());
        let den_q = Rational::from_integer(den.clone());
        let to_int = |p: &Point| -> Vec<BigInt> {
            p.coords().iter().map(|c| (c * &den_q).to_integer()).collect()
        };
        let mut cols: Vec<Vec<BigInt>> = basis.columns().iter().map(to_int).collect();
        let mut cen = to_int(center);
        let g = cols
            .iter()
            .flatten()
            .chain(cen.iter())
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let g = if g.is_zero() { BigInt::from(1) } else { g };
        for v in cols.iter_mut().flatten().chain(cen.iter_mut()) {
            *v /= &g;
        }
        // ‖(g/den)(Yx − Yc)‖² ≤ r²  ⇔  ‖Yx − Yc‖² ≤ r² den² / g².
        let bound = radius_sq * Rational::new(&den * &den, &g * &g);
        let threshold = rational::floor(&bound);
        let small = (|| {
            let cols: Option<Vec<Vec<i64>>> =
                cols.iter().map(|c| c.iter().map(ToPrimitive::to_i64).collect()).collect();
            let center: Option<Vec<i64>> = cen.iter().map(ToPrimitive::to_i64).collect();
            Some(SmallFrame { cols: cols?, center: center?, threshold: threshold.to_i128()? })
        })();
        IntegerFrame {
            scale_numer: g,
            scale_denom: den,
            cols,
            center: cen,
            threshold,
            small,
        }
    }

    fn image_big(&self, x: &[i64]) -> Vec<BigInt> {
        let n = self.center.len();
        (0..n)
            .map(|i| {
                self.cols
                    .iter()
                    .zip(x)
                    .fold(BigInt::zero(), |acc, (c, &xj)| acc + &c[i] * xj)
            })
            .collect()
    }

    fn inside(&self, x: &[i64]) -> bool {
        if let Some(s) = &self.small {
            if let Some(ok) = s.inside(x) {
                return ok;
            }
        }
        let img = self.image_big(x);
        let norm: BigInt = img
            .iter()
            .zip(&self.center)
            .map(|(y, c)| {
                let d = y - c;
                &d * &d
            })
            .sum();
        norm <= self.threshold
    }

    fn point(&self, x: &[i64]) -> Point {
        Point::new(
            self.image_big(x)
                .into_iter()
                .map(|v| Rational::new(v * &self.scale_numer, self.scale_denom.clone()))
                .collect(),
        )
    }
}

impl SmallFrame {
    /// `None` on overflow.
    fn inside(&self, x: &[i64]) -> Option<bool> {
        let mut norm: i128 = 0;
        for i in 0..self.center.len() {
            let mut v: i128 = -(self.center[i] as i128);
            for (c, &xj) in self.cols.iter().zip(x) {
                v = v.checked_add((c[i] as i128).checked_mul(xj as i128)?)?;
            }
            norm = norm.checked_add(v.checked_mul(v)?)?;
        }
        Some(norm <= self.threshold)
    }
}

/// Relative slack on the floating-point pruning radius; the exact test decides.
const FP_SLACK: f64 = 1e-9;

/// Fincke–Pohst enumeration over an LLL-reduced basis. Floating-point bounds
/// only prune; every candidate is re-checked exactly.
pub struct BallEnumerator {
    reduced: LatticeBasis,
    frame: IntegerFrame,
    mu: Vec<Vec<f64>>,
    bstar_sq: Vec<f64>,
    target: Vec<f64>,
    radius_sq_f64: f64,
    empty: bool,
    /// Lattice vector subtracted from the center before the search.
    offset: Option<Point>,
}

impl BallEnumerator {
    pub fn new(basis: &LatticeBasis, ball: &Ball) -> Result<Self> {
        let n = basis.ambient_dim();
        if let Some(c) = ball.center() {
            c.check_dim(n)?;
        }
        let reduced = lattice::lll_reduce(basis, &lattice::default_delta());
        let gs = GramSchmidt::of(&reduced);
        // Split the center into its projection onto span(Λ) and the orthogonal
        // rest, then move it next to the origin by a lattice vector so the
        // floating-point search stays accurate for far-away centers.
        let mut offset = None;
        let (center, target, perp_sq) = match ball.center() {
            None => (None, vec![Rational::zero(); reduced.rank()], Rational::zero()),
            Some(c) => {
                let bt_c: Vec<Rational> = reduced.columns().iter().map(|b| b.dot(c)).collect();
                let t: Vec<Rational> = reduced
                    .gram_inverse()
                    .iter()
                    .map(|row| row.iter().zip(&bt_c).map(|(a, b)| a * b).sum())
                    .collect();
                let proj: Rational = t.iter().zip(&bt_c).map(|(a, b)| a * b).sum();
                let k: Vec<BigInt> = t.iter().map(|v| v.round().to_integer()).collect();
                let mut shifted = c.clone();
                let t = if k.iter().all(Zero::is_zero) {
                    t
                } else {
                    let v = reduced.point(&k);
                    shifted = &shifted - &v;
                    offset = Some(v);
                    t.iter().zip(&k).map(|(a, b)| a - Rational::from_integer(b.clone())).collect()
                };
                (Some(shifted), t, c.norm_sq() - proj)
            }
        };
        let eff = ball.radius_sq() - &perp_sq;
        let frame = IntegerFrame::new(&reduced, center.as_ref(), ball.radius_sq());
        Ok(BallEnumerator {
            mu: gs.mu.iter().map(|r| r.iter().map(rational::to_f64).collect()).collect(),
            bstar_sq: gs.bstar_sq.iter().map(rational::to_f64).collect(),
            target: target.iter().map(rational::to_f64).collect(),
            radius_sq_f64: rational::to_f64(&eff) * (1.0 + FP_SLACK) + f64::MIN_POSITIVE,
            empty: eff.is_negative(),
            reduced,
            frame,
            offset,
        })
    }

    pub fn reduced_basis(&self) -> &LatticeBasis {
        &self.reduced
    }

    /// Calls `f` with the coefficient vector of every lattice point in the ball,
    /// taken w.r.t. the reduced basis and relative to the lattice vector nearest
    /// the center's projection (zero for origin-centered balls).
    pub fn for_each(&self, mut f: impl FnMut(&[i64])) {
        if self.empty {
            return;
        }
        let d = self.reduced.rank();
        let mut x = vec![0i64; d];
        self.descend(d - 1, 0.0, &mut x, &mut f);
    }

    fn descend(&self, level: usize, partial: f64, x: &mut [i64], f: &mut impl FnMut(&[i64])) {
        let d = x.len();
        let mut center = self.target[level];
        for j in level + 1..d {
            center -= self.mu[j][level] * (x[j] as f64 - self.target[j]);
        }
        let rem = (self.radius_sq_f64 - partial).max(0.0);
        let width = (rem / self.bstar_sq[level]).sqrt() * (1.0 + FP_SLACK) + FP_SLACK * (1.0 + center.abs());
        let lo = (center - width).ceil() as i64;
        let hi = (center + width).floor() as i64;
        for xi in lo..=hi {
            x[level] = xi;
            let diff = xi as f64 - center;
            let next = partial + self.bstar_sq[level] * diff * diff;
            if level == 0 {
                if self.frame.inside(x) {
                    f(x);
                }
            } else if next <= self.radius_sq_f64 * (1.0 + FP_SLACK) {
                self.descend(level - 1, next, x, f);
            }
        }
        x[level] = 0;
    }

    pub fn count(&self) -> u64 {
        let mut c = 0u64;
        self.for_each(|_| c += 1);
        c
    }

    pub fn points(&self) -> PointSet {
        let mut pts = Vec::new();
        self.for_each(|x| pts.push(self.point(x)));
        PointSet::from_points_unchecked(self.reduced.ambient_dim(), pts)
    }

    /// Lattice point for a coefficient vector produced by [`Self::for_each`].
    pub fn point(&self, x: &[i64]) -> Point {
        let p = self.frame.point(x);
        match &self.offset {
            Some(v) => &p + v,
            None => p,
        }
    }
}

/// `Λ ∩ ball`, exact and in canonical order.
pub fn points_in_ball(basis: &LatticeBasis, ball: &Ball) -> Result<PointSet> {
    Ok(BallEnumerator::new(basis, ball)?.points())
}

pub fn count_points_in_ball(basis: &LatticeBasis, ball: &Ball) -> Result<u64> {
    Ok(BallEnumerator::new(basis, ball)?.count())
}

/// A shortest nonzero lattice vector and its exact squared norm. Ties resolve
/// to the canonically smallest point.
pub fn shortest_vector(basis: &LatticeBasis) -> (Point, Rational) {
    let reduced = lattice::lll_reduce(basis, &lattice::default_delta());
    let bound = reduced
        .columns()
        .iter()
        .map(Point::norm_sq)
        .min()
        .expect("nonempty basis");
    let ball = Ball::from_radius_sq(bound).expect("positive norm");
    let pts = points_in_ball(&reduced, &ball).expect("matching dimensions");
    pts.iter()
        .filter(|p| !p.is_zero())
        .map(|p| (p.norm_sq(), p))
        .min()
        .map(|(n, p)| (p.clone(), n))
        .expect("ball around a basis vector holds it")
}

/// `π^{n/2} r^n / Γ(n/2 + 1)`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    assert!(n >= 1 && r > 0.0);
    // Γ(n/2 + 1) by the recurrence Γ(x + 1) = x Γ(x) from Γ(1) = 1 or Γ(1/2) = √π.
    let mut gamma = if n % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 + 1.0 - 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    std::f64::consts::PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma
}

/// Radius of the `n`-ball of the given volume.
pub fn radius_for_volume(n: usize, volume: f64) -> f64 {
    (volume / ball_volume(n, 1.0)).powf(1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn far_center_is_exact() {
        let far = Rational::from_integer(BigInt::from(10u64).pow(20)) + ratio(1, 2);
        let c = Point::new(vec![far.clone(), int(0)]);
        let ball = Ball::new(int(1)).unwrap().with_center(c);
        let pts = points_in_ball(&z(2), &ball).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| ball.contains(p)));
        let near = Ball::new(int(1)).unwrap().with_center(Point::new(vec![ratio(1, 2), int(0)]));
        assert_eq!(count_points_in_ball(&z(2), &near).unwrap(), 2);
    }

    fn z(n: usize) -> LatticeBasis {
        LatticeBasis::identity(n)
    }

    #[test]
    fn unit_disk() {
        let pts = points_in_ball(&z(2), &Ball::new(int(1)).unwrap()).unwrap();
        assert_eq!(pts.len(), 5);
        for c in [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]] {
            assert!(pts.contains(&Point::from_ints(&c)));
        }
    }

    #[test]
    fn frozen_counts() {
        assert_eq!(count_points_in_ball(&z(2), &Ball::new(int(2)).unwrap()).unwrap(), 13);
        assert_eq!(count_points_in_ball(&z(3), &Ball::new(int(1)).unwrap()).unwrap(), 7);
        assert_eq!(count_points_in_ball(&z(2), &Ball::new(int(5)).unwrap()).unwrap(), 81);
    }

    #[test]
    fn tiny_radius_only_origin() {
        let l = LatticeBasis::from_int_columns(&[&[3, 1], &[1, 4]]).unwrap();
        let pts = points_in_ball(&l, &Ball::new(ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(pts.points(), &[Point::zero(2)]);
    }

    #[test]
    fn boundary_is_closed() {
        // (3,4) has norm exactly 5.
        let ball = Ball::new(int(5)).unwrap();
        assert!(points_in_ball(&z(2), &ball).unwrap().contains(&Point::from_ints(&[3, 4])));
    }

    #[test]
    fn off_center_and_rank_deficient() {
        let ball = Ball::new(int(1)).unwrap().with_center(Point::new(vec![ratio(1, 2), int(0)]));
        assert_eq!(count_points_in_ball(&z(2), &ball).unwrap(), 2);
        // Lattice Z(1,1) in R^2, ball centered off the line at distance 1/√2.
        let line = LatticeBasis::from_int_columns(&[&[1, 1]]).unwrap();
        let ball = Ball::new(int(1)).unwrap().with_center(Point::from_ints(&[1, 0]));
        let pts = points_in_ball(&line, &ball).unwrap();
        assert_eq!(pts.len(), 2);
        let far = Ball::new(ratio(1, 2)).unwrap().with_center(Point::from_ints(&[1, 0]));
        assert_eq!(count_points_in_ball(&line, &far).unwrap(), 0);
    }

    #[test]
    fn theorem_radius_is_upper_bound() {
        for n in 2..8usize {
            let b = Ball::theorem_radius(n);
            let r4 = rational::pow(b.radius_sq(), 4);
            assert!(r4 >= rational::pow(&int(n as i64), 5));
            let rel = rational::to_f64(b.radius_sq()) / (n as f64).powf(1.25) - 1.0;
            assert!(rel.abs() < 1e-15);
        }
    }

    #[test]
    fn shortest_vector_examples() {
        let (_, n2) = shortest_vector(&LatticeBasis::from_int_columns(&[&[1, 0], &[1_000, 1]]).unwrap());
        assert_eq!(n2, int(1));
        let l = LatticeBasis::new(vec![
            Point::new(vec![ratio(1, 2), int(0)]),
            Point::new(vec![int(0), int(2)]),
        ])
        .unwrap();
        assert_eq!(shortest_vector(&l).1, ratio(1, 4));
    }

    #[test]
    fn volumes() {
        use std::f64::consts::PI;
        assert!((ball_volume(2, 1.0) / PI - 1.0).abs() < 1e-12);
        assert!((ball_volume(3, 1.0) / (4.0 * PI / 3.0) - 1.0).abs() < 1e-12);
        assert!((ball_volume(4, 2.0) / (PI * PI * 16.0 / 2.0) - 1.0).abs() < 1e-12);
        assert!((ball_volume(1, 3.0) - 6.0).abs() < 1e-12);
        let r = radius_for_volume(3, 10.0);
        assert!((ball_volume(3, r) - 10.0).abs() < 1e-9);
    }

    #[test]
    fn radius_validation() {
        assert!(Ball::new(int(0)).is_err());
        assert!(Ball::from_radius_f64(-1.0).is_err());
    }
}
