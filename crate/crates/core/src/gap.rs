//! Generalized arithmetic progressions
//! `G = {x0 + Σ αᵢ xᵢ : loᵢ ≤ αᵢ ≤ hiᵢ, αᵢ ∈ Z}`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{linalg, Point};
use crate::rational::{self, Rational};
use crate::sumset::PointSet;

/// Largest multiset size `gap_points` will enumerate by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    x0: Point,
    gens: Vec<Point>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Gap {
    pub fn new(x0: Point, gens: Vec<Point>, lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        let g = Gap { x0, gens, lo, hi };
        g.validate()?;
        Ok(g)
    }

    /// The 0-dimensional GAP `{x0}`.
    pub fn singleton(x0: Point) -> Self {
        Gap { x0, gens: Vec::new(), lo: Vec::new(), hi: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        let d = self.gens.len();
        if self.lo.len() != d || self.hi.len() != d {
            return Err(Error::InvalidGap(format!(
                "{} generators but {} lower and {} upper bounds",
                d,
                self.lo.len(),
                self.hi.len()
            )));
        }
        for g in &self.gens {
            g.check_dim(self.x0.dim())?;
        }
        if let Some(i) = (0..d).find(|&i| self.lo[i] > self.hi[i]) {
            return Err(Error::InvalidGap(format!(
                "bound {i}: lo {} > hi {}",
                self.lo[i], self.hi[i]
            )));
        }
        Ok(())
    }

    pub fn x0(&self) -> &Point {
        &self.x0
    }

    pub fn gens(&self) -> &[Point] {
        &self.gens
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Number of generators `d`.
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.x0.dim()
    }

    /// `hiᵢ − loᵢ + 1` for each dimension.
    pub fn side_lengths(&self) -> Vec<u128> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (h as i128 - l as i128 + 1) as u128)
            .collect()
    }

    /// Whether the generators are linearly independent over Q.
    pub fn has_independent_generators(&self) -> bool {
        let rows: Vec<Vec<Rational>> = self.gens.iter().map(|g| g.coords().to_vec()).collect();
        linalg::rank(&rows) == self.gens.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("GAP serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let g: Gap = serde_json::from_value(v.clone())?;
        g.validate()?;
        Ok(g)
    }
}

/// `Π (hiᵢ − loᵢ + 1)`, saturating at `u128::MAX`.
pub fn gap_size_multiset(g: &Gap) -> u128 {
    g.side_lengths()
        .into_iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s))
        .unwrap_or(u128::MAX)
}

pub fn gap_points(g: &Gap) -> Result<PointSet> {
    gap_points_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

/// Distinct points of `g`, refusing when the multiset size exceeds `cap`.
pub fn gap_points_with_cap(g: &Gap, cap: u128) -> Result<PointSet> {
    let size = gap_size_multiset(g);
    if size > cap {
        return Err(Error::GapTooLarge { size, cap });
    }
    let n = g.ambient_dim();
    let den = rational::common_denominator(
        g.gens.iter().chain(std::iter::once(&g.x0)).flat_map(|p| p.coords()),
    );
    let den_q = Rational::from_integer(den.clone());
    let scale = |p: &Point| -> Vec<BigInt> {
        p.coords().iter().map(|c| (c * &den_q).to_integer()).collect()
    };
    let x0 = scale(&g.x0);
    let gens: Vec<Vec<BigInt>> = g.gens.iter().map(scale).collect();
    let back = |v: Vec<BigInt>| Point::new(v.into_iter().map(|c| Rational::new(c, den.clone())).collect());

    let small = |v: &Vec<BigInt>| -> Option<Vec<i64>> { v.iter().map(ToPrimitive::to_i64).collect() };
    let small_gens: Option<Vec<Vec<i64>>> = gens.iter().map(small).collect();
    let pts: Vec<Point> = match (small(&x0), small_gens) {
        (Some(x0), Some(gens)) => {
            let mut seen: HashSet<Vec<i128>> = HashSet::new();
            for_each_coefficient(g, |alpha| {
                let p: Vec<i128> = (0..n)
                    .map(|i| {
                        gens.iter()
                            .zip(alpha)
                            .fold(x0[i] as i128, |acc, (gv, &a)| acc + gv[i] as i128 * a as i128)
                    })
                    .collect();
                seen.insert(p);
            });
            seen.into_iter()
                .map(|v| back(v.into_iter().map(BigInt::from).collect()))
                .collect()
        }
        _ => {
            let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
            for_each_coefficient(g, |alpha| {
                let p: Vec<BigInt> = (0..n)
                    .map(|i| {
                        gens.iter()
                            .zip(alpha)
                            .fold(x0[i].clone(), |acc, (gv, &a)| acc + &gv[i] * a)
                    })
                    .collect();
                seen.insert(p);
            });
            seen.into_iter().map(back).collect()
        }
    };
    Ok(PointSet::from_points_unchecked(n, pts))
}

/// Visits every coefficient vector `α` in the box, first coordinate fastest.
fn for_each_coefficient(g: &Gap, mut f: impl FnMut(&[i64])) {
    let d = g.rank();
    let mut alpha = g.lo.clone();
    loop {
        f(&alpha);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            if alpha[i] < g.hi[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = g.lo[i];
            i += 1;
        }
    }
}

/// Exact membership test for GAPs with linearly independent generators.
///
/// Coefficients are first located in floating point with a forward error
/// bound; points whose enclosure misses every admissible integer are rejected
/// outright and the remaining candidates are confirmed exactly.
pub struct GapMembership<'a> {
    gap: &'a Gap,
    /// Left inverse `(XᵀX)⁻¹Xᵀ` of the generator matrix, as rows.
    left_inverse: Vec<Vec<Rational>>,
    left_f64: Vec<Vec<f64>>,
    x0_f64: Vec<f64>,
}

/// Unit roundoff with a safety factor of four.
const ROUNDOFF: f64 = 4.0 * f64::EPSILON;

impl<'a> GapMembership<'a> {
    /// `None` when the generators are dependent.
    pub fn new(gap: &'a Gap) -> Option<Self> {
        let d = gap.rank();
        let gram: Vec<Vec<Rational>> = gap
            .gens
            .iter()
            .map(|a| gap.gens.iter().map(|b| a.dot(b)).collect())
            .collect();
        let inv = if d == 0 { Vec::new() } else { linalg::inverse(&gram)? };
        let n = gap.ambient_dim();
        let left_inverse: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..n)
                    .map(|k| (0..d).map(|j| &inv[i][j] * &gap.gens[j].coords()[k]).sum())
                    .collect()
            })
            .collect();
        let left_f64 = left_inverse
            .iter()
            .map(|row| row.iter().map(rational::to_f64).collect())
            .collect();
        Some(GapMembership { gap, left_inverse, left_f64, x0_f64: gap.x0.to_f64() })
    }

    /// The unique coefficient vector of `p`, if `p ∈ G`.
    pub fn coefficients(&self, p: &Point) -> Option<Vec<i64>> {
        if p.dim() != self.gap.ambient_dim() {
            return None;
        }
        let n = p.dim();
        let pf = p.to_f64();
        let rel: Vec<f64> = pf.iter().zip(&self.x0_f64).map(|(a, b)| a - b).collect();
        let mag: Vec<f64> = pf.iter().zip(&self.x0_f64).map(|(a, b)| a.abs() + b.abs()).collect();
        let mut candidate = Vec::with_capacity(self.left_f64.len());
        for (i, row) in self.left_f64.iter().enumerate() {
            let a: f64 = row.iter().zip(&rel).map(|(l, r)| l * r).sum();
            let scale: f64 = row.iter().zip(&mag).map(|(l, m)| l.abs() * m).sum();
            let err = (n as f64 + 4.0) * ROUNDOFF * scale + f64::MIN_POSITIVE;
            if !(a.is_finite() && err.is_finite()) {
                return self.coefficients_exact(p);
            }
            let lo = ((a - err).ceil() as i64).max(self.gap.lo[i]);
            let hi = ((a + err).floor() as i64).min(self.gap.hi[i]);
            match hi - lo {
                d if d < 0 => return None,
                0 => candidate.push(lo),
                _ => return self.coefficients_exact(p),
            }
        }
        let mut back = self.gap.x0.clone();
        for (a, g) in candidate.iter().zip(&self.gap.gens) {
            if *a != 0 {
                back.add_scaled(&rational::int(*a), g);
            }
        }
        (back == *p).then_some(candidate)
    }

    fn coefficients_exact(&self, p: &Point) -> Option<Vec<i64>> {
        let rel = p - &self.gap.x0;
        let alpha: Vec<Rational> = self
            .left_inverse
            .iter()
            .map(|row| row.iter().zip(rel.coords()).map(|(a, b)| a * b).sum())
            .collect();
        let mut back = Point::zero(p.dim());
        for (a, g) in alpha.iter().zip(&self.gap.gens) {
            back.add_scaled(a, g);
        }
        if back != rel {
            return None;
        }
        let mut out = Vec::with_capacity(alpha.len());
        for (i, a) in alpha.iter().enumerate() {
            if !a.is_integer() {
                return None;
            }
            let v = a.to_integer().to_i64()?;
            if v < self.gap.lo[i] || v > self.gap.hi[i] {
                return None;
            }
            out.push(v);
        }
        Some(out)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.coefficients(p).is_some()
    }
}

/// `|a ∩ G|` counting distinct points.
pub fn intersect_count(a: &PointSet, g: &Gap) -> Result<usize> {
    if a.is_empty() {
        return Ok(0);
    }
    if a.dim() != g.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: g.ambient_dim(), got: a.dim() });
    }
    match GapMembership::new(g) {
        Some(m) => Ok(a.iter().filter(|p| m.contains(p)).count()),
        None => Ok(a.intersection_len(&gap_points(g)?)),
    }
}

/// Stable permutation of the dimensions so that `hiᵢ − loᵢ` is non-increasing.
pub fn sort_dims_nonincreasing(g: &Gap) -> Gap {
    let mut order: Vec<usize> = (0..g.rank()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(g.hi[i] as i128 - g.lo[i] as i128));
    Gap {
        x0: g.x0.clone(),
        gens: order.iter().map(|&i| g.gens[i].clone()).collect(),
        lo: order.iter().map(|&i| g.lo[i]).collect(),
        hi: order.iter().map(|&i| g.hi[i]).collect(),
    }
}

pub fn is_sorted_nonincreasing(g: &Gap) -> bool {
    let s = g.side_lengths();
    s.windows(2).all(|w| w[0] >= w[1])
}

/// Fixes dimensions `k..=d` (1-indexed) at the values `t` and keeps the first
/// `k − 1` dimensions free. With `k > d` nothing is fixed and `t` must be empty.
pub fn restrict_gap(g: &Gap, k: usize, t: &[i64]) -> Result<Gap> {
    if k == 0 {
        return Err(Error::InvalidArgument("cut index is 1-based".into()));
    }
    let d = g.rank();
    let free = (k - 1).min(d);
    if t.len() != d - free {
        return Err(Error::RestrictionOutOfBounds(format!(
            "expected {} fixed coordinates, got {}",
            d - free,
            t.len()
        )));
    }
    let mut x0 = g.x0.clone();
    for (j, &ti) in t.iter().enumerate() {
        let i = free + j;
        if ti < g.lo[i] || ti > g.hi[i] {
            return Err(Error::RestrictionOutOfBounds(format!(
                "t for dimension {} is {ti}, outside [{}, {}]",
                i + 1,
                g.lo[i],
                g.hi[i]
            )));
        }
        if ti != 0 {
            x0.add_scaled(&rational::int(ti), &g.gens[i]);
        }
    }
    Ok(Gap {
        x0,
        gens: g.gens[..free].to_vec(),
        lo: g.lo[..free].to_vec(),
        hi: g.hi[..free].to_vec(),
    })
}

/// Every restriction `G_t` for cut `k`, in lexicographic order of `t`.
pub fn restrictions(g: &Gap, k: usize) -> Result<Vec<(Vec<i64>, Gap)>> {
    if k == 0 {
        return Err(Error::InvalidArgument("cut index is 1-based".into()));
    }
    let d = g.rank();
    let free = (k - 1).min(d);
    let fixed = Gap {
        x0: g.x0.clone(),
        gens: g.gens[free..].to_vec(),
        lo: g.lo[free..].to_vec(),
        hi: g.hi[free..].to_vec(),
    };
    let count = gap_size_multiset(&fixed);
    if count > DEFAULT_ENUMERATION_CAP {
        return Err(Error::GapTooLarge { size: count, cap: DEFAULT_ENUMERATION_CAP });
    }
    let mut ts: Vec<Vec<i64>> = Vec::with_capacity(count as usize);
    for_each_coefficient(&fixed, |t| ts.push(t.to_vec()));
    ts.sort();
    ts.into_iter()
        .map(|t| restrict_gap(g, k, &t).map(|r| (t, r)))
        .collect()
}

/// `φ(Z^d ∩ B) + shift` with `B = Π [−(bᵢ−aᵢ)/2, (bᵢ−aᵢ)/2]` and `φ(eᵢ) = xᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapLatticeImage {
    pub lattice_dim: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub box_halfwidths: Vec<Rational>,
    pub phi_columns: Vec<Point>,
    pub shift: Point,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Value::Array(v.iter().map(rational::to_json).collect()).serialize(s)
}

impl GapLatticeImage {
    /// Enumerates `φ(Z^d ∩ B) + shift`.
    pub fn points(&self) -> Result<PointSet> {
        let half: Vec<i64> = self
            .box_halfwidths
            .iter()
            .map(|h| rational::floor(h).to_i64().expect("small halfwidth"))
            .collect();
        let centered = Gap {
            x0: self.shift.clone(),
            gens: self.phi_columns.clone(),
            lo: half.iter().map(|h| -h).collect(),
            hi: half,
        };
        gap_points(&centered)
    }
}

pub fn gap_as_lattice_image(g: &Gap) -> Result<GapLatticeImage> {
    if g.lo.iter().zip(&g.hi).any(|(l, h)| (h - l) % 2 != 0) {
        return Err(Error::OddSideLength);
    }
    let mut shift = g.x0.clone();
    for ((l, h), x) in g.lo.iter().zip(&g.hi).zip(&g.gens) {
        let mid = rational::ratio(l + h, 2);
        if !mid.is_zero() {
            shift.add_scaled(&mid, x);
        }
    }
    Ok(GapLatticeImage {
        lattice_dim: g.rank(),
        box_halfwidths: g.lo.iter().zip(&g.hi).map(|(l, h)| rational::ratio(h - l, 2)).collect(),
        phi_columns: g.gens.clone(),
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    fn gap1(gens: &[i64], lo: &[i64], hi: &[i64]) -> Gap {
        Gap::new(p(&[0]), gens.iter().map(|&g| p(&[g])).collect(), lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn multiset_sizes() {
        assert_eq!(gap_size_multiset(&gap1(&[1], &[0], &[2])), 3);
        let g = Gap::new(p(&[0, 0]), vec![p(&[1, 0]), p(&[0, 1])], vec![0, -1], vec![1, 1]).unwrap();
        assert_eq!(gap_size_multiset(&g), 6);
        assert_eq!(gap_size_multiset(&Gap::singleton(p(&[5]))), 1);
    }

    #[test]
    fn distinct_points() {
        let g = gap1(&[1], &[0], &[4]);
        assert_eq!(gap_points(&g).unwrap().len(), 5);
        let g = gap1(&[1, 1], &[0, 0], &[1, 1]);
        let pts = gap_points(&g).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.len() < gap_size_multiset(&g) as usize);
        let g = Gap::new(p(&[1, 1]), vec![p(&[1, 0]), p(&[0, 1])], vec![0, 0], vec![1, 1]).unwrap();
        let pts = gap_points(&g).unwrap();
        let expect = PointSet::from_points(2, [p(&[1, 1]), p(&[2, 1]), p(&[1, 2]), p(&[2, 2])]).unwrap();
        assert_eq!(pts, expect);
    }

    #[test]
    fn cap_is_enforced() {
        let g = gap1(&[1, 1], &[0, 0], &[999, 999]);
        assert!(matches!(gap_points_with_cap(&g, 1000), Err(Error::GapTooLarge { .. })));
    }

    #[test]
    fn invalid_gaps() {
        assert!(Gap::new(p(&[0]), vec![p(&[1])], vec![2], vec![1]).is_err());
        assert!(Gap::new(p(&[0]), vec![p(&[1])], vec![0, 0], vec![1]).is_err());
        assert!(Gap::new(p(&[0]), vec![p(&[1, 0])], vec![0], vec![1]).is_err());
    }

    #[test]
    fn intersections() {
        let a = PointSet::from_points(1, [p(&[0]), p(&[1]), p(&[2])]).unwrap();
        assert_eq!(intersect_count(&a, &gap1(&[1], &[0], &[10])).unwrap(), 3);
        let shifted = Gap::new(p(&[100]), vec![p(&[1])], vec![0], vec![3]).unwrap();
        assert_eq!(intersect_count(&a, &shifted).unwrap(), 0);
        // Dependent generators fall back to enumeration.
        assert_eq!(intersect_count(&a, &gap1(&[1, 1], &[0, 0], &[1, 1])).unwrap(), 3);
    }

    #[test]
    fn sorting() {
        let g = gap1(&[1, 7], &[0, 0], &[1, 5]);
        let s = sort_dims_nonincreasing(&g);
        assert_eq!(s.lo(), &[0, 0]);
        assert_eq!(s.hi(), &[5, 1]);
        assert_eq!(s.gens()[0], p(&[7]));
        assert_eq!(sort_dims_nonincreasing(&s), s);
        let tie = gap1(&[2, 3], &[0, 0], &[3, 3]);
        assert_eq!(sort_dims_nonincreasing(&tie), tie);
        assert_eq!(gap_points(&g).unwrap(), gap_points(&s).unwrap());
    }

    #[test]
    fn restriction_examples() {
        let g = Gap::new(p(&[1, 1]), vec![p(&[1, 0]), p(&[0, 1])], vec![0, 0], vec![3, 2]).unwrap();
        let r = restrict_gap(&g, 2, &[0]).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.x0(), g.x0());
        let g1 = gap1(&[3], &[-2], &[2]);
        let r = restrict_gap(&g1, 1, &[-2]).unwrap();
        assert_eq!(r.rank(), 0);
        assert_eq!(r.x0(), &p(&[-6]));
        assert!(restrict_gap(&g1, 1, &[3]).is_err());
        assert!(restrict_gap(&g1, 1, &[]).is_err());
        // Cuts past d fix nothing.
        assert_eq!(restrict_gap(&g1, 5, &[]).unwrap(), g1);
    }

    #[test]
    fn restriction_partition() {
        let g = Gap::new(
            p(&[0, 0]),
            vec![p(&[1, 0]), p(&[1, 1]), p(&[0, 2])],
            vec![0, -1, 0],
            vec![3, 1, 1],
        )
        .unwrap();
        for k in 1..=4 {
            let rs = restrictions(&g, k).unwrap();
            let total: u128 = rs.iter().map(|(_, r)| gap_size_multiset(r)).sum();
            assert_eq!(total, gap_size_multiset(&g));
            let mut union = Vec::new();
            for (_, r) in &rs {
                union.extend(gap_points(r).unwrap().points().iter().cloned());
            }
            assert_eq!(PointSet::from_points(2, union).unwrap(), gap_points(&g).unwrap());
        }
    }

    #[test]
    fn lattice_image() {
        let g = Gap::new(p(&[5]), vec![p(&[1])], vec![-1], vec![1]).unwrap();
        let img = gap_as_lattice_image(&g).unwrap();
        assert_eq!(img.box_halfwidths, vec![rational::int(1)]);
        assert_eq!(img.shift, p(&[5]));
        assert_eq!(img.points().unwrap(), gap_points(&g).unwrap());

        let g = Gap::new(p(&[5]), vec![p(&[1])], vec![0], vec![2]).unwrap();
        let img = gap_as_lattice_image(&g).unwrap();
        assert_eq!(img.shift, p(&[6]));
        assert_eq!(img.points().unwrap(), gap_points(&g).unwrap());

        let g = Gap::new(p(&[0, 0]), vec![p(&[1, 2]), p(&[3, -1])], vec![0, -2], vec![2, 0]).unwrap();
        assert_eq!(gap_as_lattice_image(&g).unwrap().points().unwrap(), gap_points(&g).unwrap());

        let odd = gap1(&[1], &[0], &[1]);
        assert!(matches!(gap_as_lattice_image(&odd), Err(Error::OddSideLength)));
    }

    #[test]
    fn json_round_trip() {
        let g = Gap::new(p(&[1, 2]), vec![p(&[1, 0])], vec![-1], vec![3]).unwrap();
        let v = g.to_json();
        assert_eq!(v["lo"], serde_json::json!([-1]));
        assert_eq!(Gap::from_json(&v).unwrap(), g);
    }
}
