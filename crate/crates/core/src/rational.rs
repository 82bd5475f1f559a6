//! Exact rational helpers: parsing, JSON encoding as integer pairs, square-root
//! enclosures and rational bounds for irrational radii.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: go through shifts.
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift >= 0 {
            q / Rational::from_integer(BigInt::one() << (shift as usize))
        } else {
            q * Rational::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

pub fn pow(q: &Rational, k: u32) -> Rational {
    num_traits::pow(q.clone(), k as usize)
}

/// Parses `"3"`, `"-7/2"` or a plain decimal such as `"1.25"` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    s.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

fn big_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .or_else(|| num.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Parse(format!("expected integer, got {num}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("expected integer string, got {s:?}"))),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

/// `[num, den]` in lowest terms. Integers outside the `i64` range are written as
/// decimal strings.
pub fn to_json(q: &Rational) -> Value {
    Value::Array(vec![big_to_json(q.numer()), big_to_json(q.denom())])
}

pub fn from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let n = big_from_json(&pair[0])?;
            let d = big_from_json(&pair[1])?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rational::new(n, d))
        }
        // Bare integers are accepted on input for convenience.
        Value::Number(_) | Value::String(_) => big_from_json(v).map(Rational::from_integer),
        other => Err(Error::Parse(format!("expected [num, den], got {other}"))),
    }
}

/// Serde adapter for a single rational field.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        from_json(&v).map_err(D::Error::custom)
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Rigorous enclosure `[lower, upper]` of `sqrt(q)` for `q ≥ 0`; both ends coincide
/// when `q` is the square of a rational.
pub fn sqrt_enclosure(q: &Rational) -> (Rational, Rational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    let (n, d) = (q.numer(), q.denom());
    if is_perfect_square(n) && is_perfect_square(d) {
        let r = Rational::new(n.sqrt(), d.sqrt());
        return (r.clone(), r);
    }
    // sqrt(n/d) = sqrt(n*d)/d; scale by 2^64 before the integer square root.
    const SHIFT: usize = 64;
    let scaled = (n * d) << (2 * SHIFT);
    let s = scaled.sqrt();
    let den = d << SHIFT;
    (
        Rational::new(s.clone(), den.clone()),
        Rational::new(s + 1u32, den),
    )
}

/// Nearest rational to `target^(1/k)` on the requested side: `q^k ≥ target` when
/// `upper`, `q^k ≤ target` otherwise. Relative error stays within a few ulps of an
/// `f64`.
pub fn root_bound(target: &Rational, k: u32, upper: bool) -> Rational {
    assert!(target.is_positive() && k >= 1);
    let mut x = to_f64(target).powf(1.0 / k as f64);
    loop {
        let q = from_f64(x);
        let p = pow(&q, k);
        let ok = if upper { p >= *target } else { p <= *target };
        if ok {
            return q;
        }
        x = if upper { x.next_up() } else { x.next_down() };
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Rounds to 12 significant digits (ties to even) so reports print stably.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn json_pairs() {
        let q = ratio(6, 4);
        assert_eq!(to_json(&q), serde_json::json!([3, 2]));
        assert_eq!(from_json(&serde_json::json!([3, 2])).unwrap(), q);
        let big = Rational::from_integer(BigInt::from(u64::MAX) * 4u32);
        assert_eq!(from_json(&to_json(&big)).unwrap(), big);
    }

    #[test]
    fn sqrt_exact_and_enclosed() {
        let (lo, hi) = sqrt_enclosure(&ratio(9, 4));
        assert_eq!(lo, ratio(3, 2));
        assert_eq!(hi, lo);
        let (lo, hi) = sqrt_enclosure(&int(3));
        assert!(&lo * &lo <= int(3) && &hi * &hi >= int(3));
        assert!(to_f64(&(hi - lo)) < 1e-12);
    }

    #[test]
    fn root_bound_sides() {
        let t = int(32); // 2^5, so t^(1/4) = 2^(5/4)
        let up = root_bound(&t, 4, true);
        let down = root_bound(&t, 4, false);
        assert!(pow(&up, 4) >= t);
        assert!(pow(&down, 4) <= t);
        assert!((to_f64(&up) / 2f64.powf(1.25) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn round12_is_stable() {
        assert_eq!(round12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round12(round12(1.0 / 3.0)), round12(1.0 / 3.0));
    }
}
