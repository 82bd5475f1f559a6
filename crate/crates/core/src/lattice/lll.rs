//! Exact-rational LLL reduction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::basis::{unimodular_identity, LatticeBasis};
use super::hnf::IntMatrix;
use super::point::Point;
use crate::rational::{self, Rational};

pub fn default_delta() -> Rational {
    rational::ratio(99, 100)
}

/// Gram–Schmidt data of a basis: `mu[i][j]` for `j < i` and squared norms of
/// the orthogonalized vectors.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<Rational>>,
    pub bstar_sq: Vec<Rational>,
}

impl GramSchmidt {
    pub fn of(basis: &LatticeBasis) -> Self {
        let g = basis.gram();
        let d = basis.rank();
        let mut mu = vec![vec![Rational::zero(); d]; d];
        let mut bstar_sq = vec![Rational::zero(); d];
        for i in 0..d {
            for j in 0..i {
                let mut s = g[i][j].clone();
                for k in 0..j {
                    s -= &mu[i][k] * &mu[j][k] * &bstar_sq[k];
                }
                mu[i][j] = s / &bstar_sq[j];
            }
            let mut s = g[i][i].clone();
            for k in 0..i {
                s -= &mu[i][k] * &mu[i][k] * &bstar_sq[k];
            }
            bstar_sq[i] = s;
        }
        GramSchmidt { mu, bstar_sq }
    }
}

pub struct LllOutput {
    pub basis: LatticeBasis,
    /// Unimodular `U` with `reduced = input · U`.
    pub transform: IntMatrix,
}

/// LLL reduction with Lovász parameter `delta ∈ (1/4, 1)`.
pub fn lll_reduce(basis: &LatticeBasis, delta: &Rational) -> LatticeBasis {
    lll_reduce_with_transform(basis, delta).basis
}

pub fn lll_reduce_with_transform(basis: &LatticeBasis, delta: &Rational) -> LllOutput {
    assert!(
        *delta > rational::ratio(1, 4) && *delta < Rational::one(),
        "LLL delta must lie in (1/4, 1)"
    );
    let d = basis.rank();
    let mut b: Vec<Point> = basis.columns().to_vec();
    // u[i] holds the integer coefficients of b[i] in the input basis.
    let mut u: Vec<Vec<BigInt>> = unimodular_identity(d);
    let gs = GramSchmidt::of(basis);
    let (mut mu, mut bs) = (gs.mu, gs.bstar_sq);
    let half = rational::ratio(1, 2);

    let size_reduce = |k: usize, l: usize, b: &mut Vec<Point>, u: &mut Vec<Vec<BigInt>>, mu: &mut Vec<Vec<Rational>>| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = mu[k][l].round();
        let qi = q.to_integer();
        let bl = b[l].clone();
        b[k].add_scaled(&-q.clone(), &bl);
        for t in 0..d {
            let delta_u = &qi * &u[l][t];
            u[k][t] -= delta_u;
        }
        mu[k][l] -= &q;
        for i in 0..l {
            let delta_mu = &q * &mu[l][i];
            mu[k][i] -= delta_mu;
        }
    };

    let mut k = 1;
    while k < d {
        size_reduce(k, k - 1, &mut b, &mut u, &mut mu);
        let lhs = bs[k].clone();
        let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bs[k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            for j in 0..k - 1 {
                let tmp = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = tmp;
            }
            let m = mu[k][k - 1].clone();
            let big_b = &bs[k] + &m * &m * &bs[k - 1];
            mu[k][k - 1] = &m * &bs[k - 1] / &big_b;
            bs[k] = &bs[k - 1] * &bs[k] / &big_b;
            bs[k - 1] = big_b;
            for i in k + 1..d {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                let new_km1 = &t + &mu[k][k - 1] * &mu[i][k];
                mu[i][k - 1] = new_km1;
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(k, l, &mut b, &mut u, &mut mu);
            }
            k += 1;
        }
    }
    // Transpose u (rows are output vectors) into the column convention.
    let transform: IntMatrix = (0..d).map(|i| (0..d).map(|j| u[j][i].clone()).collect()).collect();
    LllOutput {
        basis: LatticeBasis::new(b).expect("LLL preserves rank"),
        transform,
    }
}

/// Size-reduction and Lovász conditions.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: &Rational) -> bool {
    let gs = GramSchmidt::of(basis);
    let half = rational::ratio(1, 2);
    let d = basis.rank();
    for i in 0..d {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (1..d).all(|k| {
        gs.bstar_sq[k] >= (delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.bstar_sq[k - 1]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg;
    use crate::rational::{int, ratio};

    fn int_det(u: &IntMatrix) -> Rational {
        let m: Vec<Vec<Rational>> = u
            .iter()
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        linalg::determinant(&m)
    }

    #[test]
    fn already_reduced() {
        let z2 = LatticeBasis::identity(2);
        let out = lll_reduce(&z2, &default_delta());
        assert!(is_lll_reduced(&out, &default_delta()));
        assert_eq!(out.determinant(), z2.determinant());
    }

    #[test]
    fn skewed_z2() {
        let b = LatticeBasis::from_int_columns(&[&[1, 0], &[1_000_000, 1]]).unwrap();
        let out = lll_reduce_with_transform(&b, &ratio(3, 4));
        for c in out.basis.columns() {
            assert!(c.norm_sq() <= int(2));
        }
        assert_eq!(int_det(&out.transform).abs(), int(1));
        assert_eq!(b.transformed(&out.transform).unwrap(), out.basis);
        assert!(is_lll_reduced(&out.basis, &ratio(3, 4)));
    }

    #[test]
    fn rank_deficient_in_r3() {
        let b = LatticeBasis::from_int_columns(&[&[5, 7, 1], &[8, 11, 2]]).unwrap();
        let out = lll_reduce_with_transform(&b, &default_delta());
        assert_eq!(out.basis.gram_det(), b.gram_det());
        assert!(is_lll_reduced(&out.basis, &default_delta()));
    }
}
