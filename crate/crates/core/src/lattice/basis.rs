use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::hnf::IntMatrix;
use super::linalg::{self, Matrix};
use super::point::Point;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Basis of a rank-`d` lattice in `R^n`, stored as `d` exact columns.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    dim: usize,
    columns: Vec<Point>,
    gram: Matrix,
    gram_inv: Matrix,
}

impl PartialEq for LatticeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.columns == other.columns
    }
}

impl Eq for LatticeBasis {}

/// `det(Λ) = det(Gram)^{1/2}`, kept as the exact Gram determinant plus a
/// certified enclosure of its square root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Determinant {
    pub gram_det: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

impl Determinant {
    pub fn from_gram_det(gram_det: Rational) -> Self {
        let (lower, upper) = rational::sqrt_enclosure(&gram_det);
        Determinant { gram_det, lower, upper }
    }

    pub fn exact(&self) -> Option<&Rational> {
        (self.lower == self.upper).then_some(&self.lower)
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&((&self.lower + &self.upper) / rational::int(2)))
    }

    /// Whether the two enclosures intersect.
    pub fn overlaps(&self, other: &Determinant) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

impl LatticeBasis {
    pub fn new(columns: Vec<Point>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::DegenerateBasis);
        };
        let dim = first.dim();
        for c in &columns {
            c.check_dim(dim)?;
        }
        if columns.len() > dim || dim == 0 {
            return Err(Error::DegenerateBasis);
        }
        let gram: Matrix = columns
            .iter()
            .map(|a| columns.iter().map(|b| a.dot(b)).collect())
            .collect();
        let gram_inv = linalg::inverse(&gram).ok_or(Error::DegenerateBasis)?;
        Ok(LatticeBasis { dim, columns, gram, gram_inv })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| Point::unit(n, i)).collect()).expect("identity basis")
    }

    pub fn from_int_columns(cols: &[&[i64]]) -> Result<Self> {
        Self::new(cols.iter().map(|c| Point::from_ints(c)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Point] {
        &self.columns
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn gram_det(&self) -> Rational {
        linalg::determinant(&self.gram)
    }

    pub fn determinant(&self) -> Determinant {
        Determinant::from_gram_det(self.gram_det())
    }

    pub fn point(&self, coeffs: &[BigInt]) -> Point {
        let mut p = Point::zero(self.dim);
        for (c, col) in coeffs.iter().zip(&self.columns) {
            if !c.is_zero() {
                p.add_scaled(&Rational::from_integer(c.clone()), col);
            }
        }
        p
    }

    pub fn point_i64(&self, coeffs: &[i64]) -> Point {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        self.point(&big)
    }

    /// Real coefficients of `p` when it lies in the span of the basis.
    pub fn coefficients(&self, p: &Point) -> Result<Option<Vec<Rational>>> {
        p.check_dim(self.dim)?;
        let bt_p: Vec<Rational> = self.columns.iter().map(|c| c.dot(p)).collect();
        let coeffs: Vec<Rational> = self
            .gram_inv
            .iter()
            .map(|row| row.iter().zip(&bt_p).map(|(a, b)| a * b).sum())
            .collect();
        let mut back = Point::zero(self.dim);
        for (c, col) in coeffs.iter().zip(&self.columns) {
            back.add_scaled(c, col);
        }
        Ok((back == *p).then_some(coeffs))
    }

    /// Integer coefficients of `p`, or `None` if `p ∉ Λ`.
    pub fn integer_coefficients(&self, p: &Point) -> Result<Option<Vec<BigInt>>> {
        Ok(self.coefficients(p)?.and_then(|cs| {
            cs.iter()
                .map(|c| c.is_integer().then(|| c.to_integer()))
                .collect()
        }))
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        Ok(self.integer_coefficients(p)?.is_some())
    }

    pub fn scaled(&self, s: &Rational) -> Result<Self> {
        Self::new(self.columns.iter().map(|c| c.scale(s)).collect())
    }

    /// Basis `B·U` for an integer `rank × k` matrix `U`.
    pub fn transformed(&self, u: &IntMatrix) -> Result<Self> {
        let k = u.first().map_or(0, Vec::len);
        let cols = (0..k)
            .map(|j| {
                let coeffs: Vec<BigInt> = u.iter().map(|row| row[j].clone()).collect();
                self.point(&coeffs)
            })
            .collect();
        Self::new(cols)
    }

    /// Dual basis `B (BᵀB)^{-1}`, spanning the same subspace.
    pub fn dual(&self) -> Self {
        let cols = (0..self.rank())
            .map(|j| {
                let mut p = Point::zero(self.dim);
                for (i, col) in self.columns.iter().enumerate() {
                    p.add_scaled(&self.gram_inv[i][j], col);
                }
                p
            })
            .collect();
        Self::new(cols).expect("dual of a valid basis")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "columns": self.columns.iter().map(Point::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("basis needs integer \"dim\"".into()))? as usize;
        let cols = match v.get("columns") {
            Some(Value::Array(cs)) => cs.iter().map(Point::from_json).collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::Parse("basis needs \"columns\" array".into())),
        };
        for c in &cols {
            c.check_dim(dim)?;
        }
        Self::new(cols)
    }
}

pub fn gram(basis: &LatticeBasis) -> Matrix {
    basis.gram().clone()
}

pub fn determinant(basis: &LatticeBasis) -> Determinant {
    basis.determinant()
}

pub fn membership(basis: &LatticeBasis, p: &Point) -> Result<bool> {
    basis.contains(p)
}

pub(crate) fn unimodular_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}
