//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the enumeration, sumset or GAP code under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use latgap::lattice::{LatticeBasis, Point};
use latgap::rational::{self, Rational};
use latgap::gap::Gap;
use num_traits::Zero;
use rand::Rng;

/// Every integer vector in `Π [lo_i, hi_i]`.
pub fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut x = lo.to_vec();
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

fn combination(basis: &LatticeBasis, x: &[i64]) -> Point {
    let n = basis.ambient_dim();
    let mut p = vec![Rational::zero(); n];
    for (b, &xi) in basis.columns().iter().zip(x) {
        for (pi, bi) in p.iter_mut().zip(b.coords()) {
            *pi += bi * Rational::from_integer(xi.into());
        }
    }
    Point::new(p)
}

/// Inverse of a small float matrix by Gauss–Jordan.
fn inverse_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..k {
        let piv = (c..k).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, piv);
        let p = a[c][c];
        for v in a[c].iter_mut() {
            *v /= p;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                for j in 0..2 * k {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    a.into_iter().map(|r| r[k..].to_vec()).collect()
}

/// Coefficient box containing every `x` with `‖Bx − c‖ ≤ r`: by Cramer's rule
/// `|x_i − t_i| ≤ r·sqrt((G⁻¹)_ii)` with `t` the coordinates of the projection
/// of `c`. One unit of slack absorbs floating-point error.
pub fn coefficient_box(basis: &LatticeBasis, center: Option<&Point>, r_sq: &Rational) -> (Vec<i64>, Vec<i64>) {
    let g: Vec<Vec<f64>> = basis
        .columns()
        .iter()
        .map(|a| basis.columns().iter().map(|b| rational::to_f64(&a.dot(b))).collect())
        .collect();
    let gi = inverse_f64(&g);
    let d = basis.rank();
    let t: Vec<f64> = match center {
        None => vec![0.0; d],
        Some(c) => {
            let btc: Vec<f64> = basis.columns().iter().map(|b| rational::to_f64(&b.dot(c))).collect();
            (0..d).map(|i| (0..d).map(|j| gi[i][j] * btc[j]).sum()).collect()
        }
    };
    let r = rational::to_f64(r_sq).sqrt();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let w = r * gi[i][i].max(0.0).sqrt();
        lo.push((t[i] - w).floor() as i64 - 1);
        hi.push((t[i] + w).ceil() as i64 + 1);
    }
    (lo, hi)
}

pub fn box_size(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter().zip(hi).map(|(l, h)| (h - l + 1).max(0) as u128).product()
}

/// `Λ ∩ B(c, r)` by scanning the Cramer coefficient box.
pub fn brute_ball(basis: &LatticeBasis, center: Option<&Point>, r_sq: &Rational) -> BTreeSet<Point> {
    let (lo, hi) = coefficient_box(basis, center, r_sq);
    let mut out = BTreeSet::new();
    for_each_in_box(&lo, &hi, |x| {
        let p = combination(basis, x);
        let d = match center {
            Some(c) => (&p - c).norm_sq(),
            None => p.norm_sq(),
        };
        if d <= *r_sq {
            out.insert(p);
        }
    });
    out
}

/// Shortest nonzero squared norm by box scan.
pub fn brute_shortest_sq(basis: &LatticeBasis) -> Rational {
    let bound = basis.columns().iter().map(Point::norm_sq).min().unwrap();
    brute_ball(basis, None, &bound)
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.norm_sq())
        .min()
        .unwrap()
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Supporting half-spaces `h·x ≤ h0` of a full-dimensional hull in dimension
/// 2 or 3, found by testing every pair/triple of vertices.
fn facets(vertices: &[Point]) -> Vec<(Vec<Rational>, Rational)> {
    let n = vertices[0].dim();
    let mut out = Vec::new();
    let mut push_if_supporting = |h: Vec<Rational>| {
        if h.iter().all(Zero::is_zero) {
            return;
        }
        let vals: Vec<Rational> = vertices
            .iter()
            .map(|v| v.coords().iter().zip(&h).map(|(a, b)| a * b).sum())
            .collect();
        let max = vals.iter().max().unwrap().clone();
        let min = vals.iter().min().unwrap().clone();
        out.push((h.clone(), max));
        out.push((h.iter().map(|x| -x).collect(), -min));
    };
    match n {
        1 => push_if_supporting(vec![rational::int(1)]),
        2 => {
            for i in 0..vertices.len() {
                for j in i + 1..vertices.len() {
                    let d = &vertices[j] - &vertices[i];
                    let h = vec![-d.coords()[1].clone(), d.coords()[0].clone()];
                    push_if_supporting(h);
                }
            }
        }
        3 => {
            for i in 0..vertices.len() {
                for j in i + 1..vertices.len() {
                    for k in j + 1..vertices.len() {
                        let u = &vertices[j] - &vertices[i];
                        let w = &vertices[k] - &vertices[i];
                        let (u, w) = (u.coords(), w.coords());
                        let h = vec![
                            &u[1] * &w[2] - &u[2] * &w[1],
                            &u[2] * &w[0] - &u[0] * &w[2],
                            &u[0] * &w[1] - &u[1] * &w[0],
                        ];
                        push_if_supporting(h);
                    }
                }
            }
        }
        _ => panic!("oracle supports dimensions 1 to 3"),
    }
    out
}

/// True when the vertices affinely span their ambient space (n ≤ 3).
pub fn full_dimensional(vertices: &[Point]) -> bool {
    let n = vertices[0].dim();
    let diffs: Vec<Point> = vertices.iter().map(|v| v - &vertices[0]).collect();
    match n {
        1 => diffs.iter().any(|d| !d.is_zero()),
        2 => diffs.iter().enumerate().any(|(i, a)| {
            diffs[i + 1..]
                .iter()
                .any(|b| !(&a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0]).is_zero())
        }),
        3 => {
            let m = diffs.len();
            (0..m).any(|i| {
                (i + 1..m).any(|j| (j + 1..m).any(|k| !det3(diffs[i].coords(), diffs[j].coords(), diffs[k].coords()).is_zero()))
            })
        }
        _ => panic!("oracle supports dimensions 1 to 3"),
    }
}

/// Integer points in a full-dimensional hull (n ≤ 3), by box scan and the
/// brute-force facet list. Every supporting direction through vertex pairs or
/// triples is kept, which includes all facets.
pub fn brute_polytope_integer_points(vertices: &[Point]) -> BTreeSet<Point> {
    assert!(full_dimensional(vertices));
    let n = vertices[0].dim();
    let hs = facets(vertices);
    let lo: Vec<i64> = (0..n)
        .map(|i| rational::floor(vertices.iter().map(|v| &v.coords()[i]).min().unwrap()).try_into().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|i| rational::ceil(vertices.iter().map(|v| &v.coords()[i]).max().unwrap()).try_into().unwrap())
        .collect();
    let mut out = BTreeSet::new();
    for_each_in_box(&lo, &hi, |x| {
        let p = Point::from_ints(x);
        let inside = hs.iter().all(|(h, h0)| {
            let v: Rational = p.coords().iter().zip(h).map(|(a, b)| a * b).sum();
            v <= *h0
        });
        if inside {
            out.insert(p);
        }
    });
    out
}

pub fn brute_sumset(a: &[Point], b: &[Point]) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x + y);
        }
    }
    out
}

/// Points of a GAP by direct expansion of every coefficient vector.
pub fn brute_gap_points(g: &Gap) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    for_each_in_box(g.lo(), g.hi(), |alpha| {
        let mut p = g.x0().clone();
        for (a, x) in alpha.iter().zip(g.gens()) {
            p = &p + &x.scale(&rational::int(*a));
        }
        out.insert(p);
    });
    out
}

pub fn brute_intersect(a: &[Point], g: &Gap) -> usize {
    let pts = brute_gap_points(g);
    a.iter().filter(|p| pts.contains(p)).count()
}

pub fn random_int_point(rng: &mut impl Rng, n: usize, m: i64) -> Point {
    let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-m..=m)).collect();
    Point::from_ints(&c)
}

/// A random full-rank integer basis with small entries.
pub fn random_int_basis(rng: &mut impl Rng, n: usize, m: i64) -> LatticeBasis {
    loop {
        let cols: Vec<Point> = (0..n).map(|_| random_int_point(rng, n, m)).collect();
        if let Ok(b) = LatticeBasis::new(cols) {
            return b;
        }
    }
}

/// Random GAP in `Z^n` with small generators and bounds.
pub fn random_small_gap(rng: &mut impl Rng, n: usize, max_d: usize, max_side: i64) -> Gap {
    let d = rng.gen_range(0..=max_d);
    let x0 = random_int_point(rng, n, 3);
    let gens = (0..d).map(|_| random_int_point(rng, n, 3)).collect();
    let lo: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=0)).collect();
    let hi = lo.iter().map(|l| l + rng.gen_range(0..max_side)).collect();
    Gap::new(x0, gens, lo, hi).unwrap()
}

