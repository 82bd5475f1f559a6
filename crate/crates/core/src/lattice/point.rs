use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exact rational coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn from_bigints(coords: impl IntoIterator<Item = BigInt>) -> Self {
        Point(coords.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    /// `i`-th standard unit vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zero(dim);
        p.0[i] = rational::int(1);
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, got: self.dim() })
        }
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|c| c * s).collect())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn norm_f64(&self) -> f64 {
        rational::to_f64(&self.norm_sq()).sqrt()
    }

    /// `self + s * other`, in place.
    pub fn add_scaled(&mut self, s: &Rational, other: &Point) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(rational::to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(items) => items
                .iter()
                .map(rational::from_json)
                .collect::<Result<Vec<_>>>()
                .map(Point),
            other => Err(Error::Parse(format!("expected point array, got {other}"))),
        }
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Point::from_json(&v).map_err(D::Error::custom)
    }
}

/// Linear span of linearly independent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    spanning: Vec<Point>,
}

impl Subspace {
    pub fn new(spanning: Vec<Point>) -> Result<Self> {
        if let Some(first) = spanning.first() {
            let n = first.dim();
            for p in &spanning {
                p.check_dim(n)?;
            }
            let rows: Vec<Vec<Rational>> = spanning.iter().map(|p| p.coords().to_vec()).collect();
            if super::linalg::rank(&rows) != spanning.len() {
                return Err(Error::InvalidArgument(
                    "subspace spanning vectors are linearly dependent".into(),
                ));
            }
        }
        Ok(Subspace { spanning })
    }

    pub fn spanning(&self) -> &[Point] {
        &self.spanning
    }

    pub fn dim(&self) -> usize {
        self.spanning.len()
    }

    pub fn contains(&self, p: &Point) -> bool {
        let mut rows: Vec<Vec<Rational>> =
            self.spanning.iter().map(|q| q.coords().to_vec()).collect();
        rows.push(p.coords().to_vec());
        super::linalg::rank(&rows) == self.dim()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let pts = match v {
            Value::Array(items) => items.iter().map(Point::from_json).collect::<Result<Vec<_>>>()?,
            Value::Object(map) => match map.get("spanning") {
                Some(Value::Array(items)) => {
                    items.iter().map(Point::from_json).collect::<Result<Vec<_>>>()?
                }
                _ => return Err(Error::Parse("subspace object needs \"spanning\"".into())),
            },
            other => return Err(Error::Parse(format!("expected subspace, got {other}"))),
        };
        Subspace::new(pts)
    }
}
