use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::ball::{points_in_ball, Ball};
use crate::error::{Error, Result};
use crate::lattice::{linalg, LatticeBasis, Point};
use crate::rational::{self, Rational};
use crate::sumset::PointSet;

/// Convex hull of finitely many vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Option<Vec<Facet>>,
}

/// `normal · x ≤ offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Facet {
    normal: Vec<BigInt>,
    offset: Rational,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidArgument("polytope needs at least one vertex".into()));
        };
        let dim = first.dim();
        for v in &vertices {
            v.check_dim(dim)?;
        }
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let facets = facets_if_full_dimensional(&vertices, dim);
        Ok(VPolytope { dim, vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex set closed under negation.
    pub fn is_symmetric(&self) -> bool {
        self.vertices.iter().all(|v| self.vertices.binary_search(&-v).is_ok())
    }

    pub fn dilate(&self, k: &Rational) -> Self {
        Self::new(self.vertices.iter().map(|v| v.scale(k)).collect()).expect("nonempty")
    }

    /// Largest squared vertex norm: the hull lies in this origin-centered ball.
    pub fn max_norm_sq(&self) -> Rational {
        self.vertices.iter().map(Point::norm_sq).max().expect("nonempty")
    }

    /// Exact closed-hull membership.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        match &self.facets {
            Some(fs) => fs.iter().all(|f| {
                let lhs: Rational = f
                    .normal
                    .iter()
                    .zip(p.coords())
                    .map(|(a, x)| Rational::from_integer(a.clone()) * x)
                    .sum();
                lhs <= f.offset
            }),
            None => hull_contains_lp(&self.vertices, p),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "vertices": self.vertices.iter().map(Point::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = match v {
            Value::Array(a) => a,
            Value::Object(m) => match m.get("vertices") {
                Some(Value::Array(a)) => a,
                _ => return Err(Error::Parse("polytope needs \"vertices\"".into())),
            },
            _ => return Err(Error::Parse("polytope must be an object or array".into())),
        };
        Self::new(arr.iter().map(Point::from_json).collect::<Result<Vec<_>>>()?)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let den = rational::common_denominator(v);
    let den_q = Rational::from_integer(den);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den_q).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Facet inequalities of a full-dimensional hull: every hyperplane through `dim`
/// affinely independent vertices that supports all vertices.
fn facets_if_full_dimensional(vertices: &[Point], dim: usize) -> Option<Vec<Facet>> {
    let v0 = &vertices[0];
    let diffs: Vec<Vec<Rational>> = vertices[1..].iter().map(|v| (v - v0).into_coords()).collect();
    if linalg::rank(&diffs) != dim {
        return None;
    }
    let mut facets: Vec<Facet> = Vec::new();
    for subset in combinations(vertices.len(), dim) {
        let base = &vertices[subset[0]];
        let rows: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|&i| (&vertices[i] - base).into_coords())
            .collect();
        let ns = linalg::nullspace(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        let normal = primitive_integer(&ns[0]);
        let np = Point::from_bigints(normal.iter().cloned());
        let offset = np.dot(base);
        let sides: Vec<Rational> = vertices.iter().map(|v| np.dot(v) - &offset).collect();
        let facet = if sides.iter().all(|s| !s.is_positive()) {
            Facet { normal, offset }
        } else if sides.iter().all(|s| !s.is_negative()) {
            Facet { normal: normal.iter().map(|x| -x).collect(), offset: -offset }
        } else {
            continue;
        };
        if !facets.contains(&facet) {
            facets.push(facet);
        }
    }
    Some(facets)
}

/// Exact phase-one simplex (Bland's rule) deciding whether `p` is a convex
/// combination of `vertices`.
pub fn hull_contains_lp(vertices: &[Point], p: &Point) -> bool {
    let m = vertices.len();
    let n = p.dim();
    let rows = n + 1;
    let cols = m + rows;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for i in 0..=n {
        let mut row: Vec<Rational> = (0..m)
            .map(|j| if i < n { vertices[j].coords()[i].clone() } else { Rational::one() })
            .collect();
        row.extend((0..rows).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        let mut rhs = if i < n { p.coords()[i].clone() } else { Rational::one() };
        if rhs.is_negative() {
            for x in row.iter_mut().take(m) {
                *x = -x.clone();
            }
            rhs = -rhs;
        }
        row.push(rhs);
        t.push(row);
    }
    let mut basis: Vec<usize> = (m..cols).collect();
    let mut cost: Vec<Rational> = (0..cols)
        .map(|j| if j < m { -t.iter().map(|r| r[j].clone()).sum::<Rational>() } else { Rational::zero() })
        .collect();
    let mut objective: Rational = t.iter().map(|r| r[cols].clone()).sum();
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
        objective += &f * &prow[cols];
        basis[r] = enter;
    }
    objective.is_zero()
}

/// All integer points of the closed hull, by exact bounding box plus exact
/// membership per candidate.
pub fn integer_points_in_polytope(poly: &VPolytope) -> PointSet {
    let n = poly.dim();
    let lo: Vec<BigInt> = (0..n)
        .map(|i| poly.vertices.iter().map(|v| rational::ceil(&v.coords()[i])).min().expect("vertex"))
        .collect();
    let hi: Vec<BigInt> = (0..n)
        .map(|i| poly.vertices.iter().map(|v| rational::floor(&v.coords()[i])).max().expect("vertex"))
        .collect();
    let mut out = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return PointSet::empty(n);
    }
    let mut cur = lo.clone();
    loop {
        let p = Point::from_bigints(cur.iter().cloned());
        if poly.contains(&p) {
            out.push(p);
        }
        let mut i = 0;
        loop {
            if i == n {
                return PointSet::from_points_unchecked(n, out);
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i].clone();
            i += 1;
        }
    }
}

/// `Λ ∩ P` via enumeration of the circumscribed origin ball.
pub fn lattice_points_in_polytope(basis: &LatticeBasis, poly: &VPolytope) -> Result<PointSet> {
    if basis.ambient_dim() != poly.dim() {
        return Err(Error::DimensionMismatch { expected: basis.ambient_dim(), got: poly.dim() });
    }
    let r2 = poly.max_norm_sq();
    if r2.is_zero() {
        // The hull is {0}.
        return PointSet::from_points(poly.dim(), [Point::zero(poly.dim())]);
    }
    let candidates = points_in_ball(basis, &Ball::from_radius_sq(r2)?)?;
    Ok(PointSet::from_points_unchecked(
        poly.dim(),
        candidates.iter().filter(|p| poly.contains(p)).cloned().collect(),
    ))
}

/// Hull of `(N,0,0), (−N,0,0), (0,N,1), (0,−N,1)` in `R^3`.
pub fn counterexample_body(n: i64) -> VPolytope {
    VPolytope::new(vec![
        Point::from_ints(&[n, 0, 0]),
        Point::from_ints(&[-n, 0, 0]),
        Point::from_ints(&[0, n, 1]),
        Point::from_ints(&[0, -n, 1]),
    ])
    .expect("four vertices in R^3")
}
