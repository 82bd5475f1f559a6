//! Finite point sets, Minkowski sums and doubling factors.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::rational::{self, Rational};

/// Deduplicated finite set of points, kept in canonical (lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet { dim, points: Vec::new() }
    }

    pub fn from_points(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().collect();
        for p in &points {
            p.check_dim(dim)?;
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    /// Builds from points already known to share dimension `dim`.
    pub(crate) fn from_points_unchecked(dim: usize, mut points: Vec<Point>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.points.iter().filter(|p| other.contains(p)).count()
    }

    pub fn translate(&self, t: &Point) -> Result<PointSet> {
        t.check_dim(self.dim)?;
        Ok(PointSet::from_points_unchecked(self.dim, self.points.iter().map(|p| p + t).collect()))
    }

    pub fn negate(&self) -> PointSet {
        PointSet::from_points_unchecked(self.dim, self.points.iter().map(|p| -p).collect())
    }

    /// `A = −A`.
    pub fn is_symmetric(&self) -> bool {
        self.points.iter().all(|p| self.contains(&-p))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.points.iter().map(Point::to_json).collect())
    }

    /// Reads a JSON array of points. An empty array yields an empty set of
    /// dimension 0.
    pub fn from_json(v: &Value) -> Result<Self> {
        let Value::Array(items) = v else {
            return Err(Error::Parse("point set must be a JSON array".into()));
        };
        let pts = items.iter().map(Point::from_json).collect::<Result<Vec<_>>>()?;
        let dim = pts.first().map_or(0, Point::dim);
        PointSet::from_points(dim, pts)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Sizes of `A` and `A+A` with the exact ratio `K = |A+A| / |A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    pub size_a: usize,
    pub size_aa: usize,
    #[serde(with = "rational::serde_rational")]
    pub doubling: Rational,
}

/// Points scaled to a shared denominator, as machine integers when they fit.
enum Scaled {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

fn scale_all(sets: [&PointSet; 2]) -> (BigInt, Scaled, Scaled) {
    let den = rational::common_denominator(sets.iter().flat_map(|s| s.iter()).flat_map(|p| p.coords()));
    let den_q = Rational::from_integer(den.clone());
    let big = |s: &PointSet| -> Vec<Vec<BigInt>> {
        s.iter()
            .map(|p| p.coords().iter().map(|c| (c * &den_q).to_integer()).collect())
            .collect()
    };
    let (ba, bb) = (big(sets[0]), big(sets[1]));
    let small = |v: &Vec<Vec<BigInt>>| -> Option<Vec<Vec<i64>>> {
        v.iter().map(|p| p.iter().map(ToPrimitive::to_i64).collect()).collect()
    };
    match (small(&ba), small(&bb)) {
        (Some(sa), Some(sb)) => (den, Scaled::Small(sa), Scaled::Small(sb)),
        _ => (den, Scaled::Big(ba), Scaled::Big(bb)),
    }
}

const PARALLEL_PAIRS: usize = 1 << 16;

fn pair_sums<T, S>(a: &[Vec<T>], b: &[Vec<T>], add: impl Fn(&T, &T) -> S + Sync) -> HashSet<Vec<S>>
where
    T: Sync,
    S: Eq + std::hash::Hash + Send,
{
    let chunk = |xs: &[Vec<T>]| -> HashSet<Vec<S>> {
        let mut out = HashSet::with_capacity(xs.len() * b.len());
        for x in xs {
            for y in b {
                out.insert(x.iter().zip(y).map(|(u, v)| add(u, v)).collect());
            }
        }
        out
    };
    if a.len() * b.len() < PARALLEL_PAIRS {
        return chunk(a);
    }
    a.par_chunks(a.len().div_ceil(rayon::current_num_threads() * 4).max(1))
        .map(chunk)
        .reduce(HashSet::new, |mut acc, s| {
            if acc.len() < s.len() {
                let mut s = s;
                s.extend(acc);
                s
            } else {
                acc.extend(s);
                acc
            }
        })
}

/// `{x + y : x ∈ a, y ∈ b}` as an exact deduplicated set.
pub fn minkowski_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    if a.is_empty() || b.is_empty() {
        let dim = if a.is_empty() { b.dim.max(a.dim) } else { a.dim };
        return Ok(PointSet::empty(dim));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    let (den, sa, sb) = scale_all([a, b]);
    let back = |coords: Vec<BigInt>| {
        Point::new(coords.into_iter().map(|c| Rational::new(c, den.clone())).collect())
    };
    let pts: Vec<Point> = match (sa, sb) {
        (Scaled::Small(x), Scaled::Small(y)) => pair_sums(&x, &y, |u, v| *u as i128 + *v as i128)
            .into_iter()
            .map(|v| back(v.into_iter().map(BigInt::from).collect()))
            .collect(),
        (Scaled::Big(x), Scaled::Big(y)) => {
            pair_sums(&x, &y, |u, v| u + v).into_iter().map(back).collect()
        }
        _ => unreachable!("both sets share one representation"),
    };
    Ok(PointSet::from_points_unchecked(a.dim, pts))
}

pub fn doubling_factor(a: &PointSet) -> Result<DoublingReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let aa = minkowski_sum(a, a)?;
    Ok(DoublingReport {
        size_a: a.len(),
        size_aa: aa.len(),
        doubling: Rational::new(BigInt::from(aa.len()), BigInt::from(a.len())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn line(xs: &[i64]) -> PointSet {
        PointSet::from_points(1, xs.iter().map(|&x| Point::from_ints(&[x]))).unwrap()
    }

    #[test]
    fn small_sums() {
        assert_eq!(minkowski_sum(&line(&[0]), &line(&[0])).unwrap(), line(&[0]));
        assert_eq!(minkowski_sum(&line(&[0, 1]), &line(&[0, 1])).unwrap(), line(&[0, 1, 2]));
    }

    #[test]
    fn unit_ball_in_z2() {
        let a = PointSet::from_points(
            2,
            [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|c| Point::from_ints(c)),
        )
        .unwrap();
        let aa = minkowski_sum(&a, &a).unwrap();
        assert_eq!(aa.len(), 13);
        let rep = doubling_factor(&a).unwrap();
        assert_eq!(rep.doubling, ratio(13, 5));
        assert!(a.is_symmetric());
        assert!(a.is_subset(&aa));
    }

    #[test]
    fn progression_doubling() {
        for m in 1..20 {
            let xs: Vec<i64> = (0..m).collect();
            let rep = doubling_factor(&line(&xs)).unwrap();
            assert_eq!(rep.doubling, ratio(2 * m - 1, m));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(doubling_factor(&PointSet::empty(2)), Err(Error::EmptySet)));
        let p2 = PointSet::from_points(2, [Point::from_ints(&[0, 0])]).unwrap();
        assert!(minkowski_sum(&line(&[1]), &p2).is_err());
        assert!(PointSet::from_points(2, [Point::from_ints(&[0])]).is_err());
    }

    #[test]
    fn rational_and_big_paths_agree() {
        let a = PointSet::from_points(
            1,
            [ratio(1, 3), ratio(1, 2), ratio(5, 6)].into_iter().map(|q| Point::new(vec![q])),
        )
        .unwrap();
        let aa = minkowski_sum(&a, &a).unwrap();
        // 2/3, 5/6, 7/6, 1, 4/3, 5/3 -> 1/3+1/2 = 5/6 twice
        assert_eq!(aa.len(), 6);
        let huge = Rational::from_integer(BigInt::from(i64::MAX) * 3u32);
        let b = PointSet::from_points(1, [Point::new(vec![huge.clone()]), Point::new(vec![-huge])]).unwrap();
        let bb = minkowski_sum(&b, &b).unwrap();
        assert_eq!(bb.len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let a = line(&[3, -1, 2]);
        let v = a.to_json();
        assert_eq!(PointSet::from_json(&v).unwrap(), a);
    }
}
