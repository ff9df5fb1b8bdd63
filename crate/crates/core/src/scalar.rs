//! Number representations for probability tables.
//!
//! Tables are generic over [`Scalar`], implemented for exact
//! [`Rational`]s and for `f64`. The two never mix inside one table;
//! conversion goes through [`Scalar::to_f64`] (promotion to floating
//! point) or [`rationalize`] (continued-fraction approximation).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Numeric type a table can be stored in.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + Send + Sync + 'static {
    /// True for the exact representation.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality up to `tol`. Exact values ignore `tol` and compare exactly.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn to_probability(&self) -> Probability;

    fn abs_diff(&self, other: &Self) -> Self {
        if *self >= *other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    /// Within `tol` of 0 or of 1.
    fn is_boolean(&self, tol: f64) -> bool {
        self.approx_eq(&Self::zero(), tol) || self.approx_eq(&Self::one(), tol)
    }

    fn in_unit_interval(&self, tol: f64) -> bool {
        let v = self.to_f64();
        if Self::EXACT {
            *self >= Self::zero() && *self <= Self::one()
        } else {
            v.is_finite() && v >= -tol && v <= 1.0 + tol
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_probability(&self) -> Probability {
        Probability::Exact(self.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_probability(&self) -> Probability {
        Probability::Float(*self)
    }
}

/// Converts a big rational to the nearest-ish `f64`, robust to numerators
/// and denominators that overflow `f64` on their own.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// A single probability value tagged with its representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Probability {
    Exact(Rational),
    Float(f64),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => ratio_to_f64(r),
            Probability::Float(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) => f.write_str(&format_rational(r)),
            Probability::Float(v) => write!(f, "{v:?}"),
        }
    }
}

impl Serialize for Probability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Probability::Exact(r) => s.serialize_str(&format_rational(r)),
            Probability::Float(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s)
                .map(Probability::Exact)
                .map_err(serde::de::Error::custom),
            Raw::Number(v) => Ok(Probability::Float(v)),
        }
    }
}

/// Renders as `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidProbability(format!("cannot parse `{text}` as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidProbability(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// by continued-fraction convergents and the final semiconvergent.
pub fn rationalize(x: f64, max_denom: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidProbability(format!("non-finite value {x}")));
    }
    if max_denom == 0 {
        return Err(Error::Domain("denominator cap must be positive".into()));
    }
    let exact = Rational::from_float(x).expect("finite float");
    let cap = BigInt::from(max_denom);

    // Convergents h/k of the exact binary value.
    let (mut h_prev, mut h) = (BigInt::one(), exact.numer().div_floor(exact.denom()));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut rem = exact.clone() - Rational::from_integer(h.clone());
    while !rem.is_zero() {
        let inv = rem.recip();
        let a = inv.numer().div_floor(inv.denom());
        let k_next = &a * &k + &k_prev;
        if k_next > cap {
            // Largest admissible semiconvergent, compared with the last convergent.
            let t = (&cap - &k_prev).div_floor(&k);
            let semi = Rational::new(&t * &h + &h_prev, &t * &k + &k_prev);
            let conv = Rational::new(h.clone(), k.clone());
            let d_semi = (semi.clone() - exact.clone()).abs();
            let d_conv = (conv.clone() - exact.clone()).abs();
            return Ok(if d_semi < d_conv { semi } else { conv });
        }
        let h_next = &a * &h + &h_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        rem = inv - Rational::from_integer(a);
    }
    Ok(Rational::new(h, k))
}

/// Rounds a probability vector to multiples of `1/denom` summing to exactly
/// one (largest-remainder method).
pub fn round_to_denominator(weights: &[f64], denom: u32) -> Vec<Rational> {
    let total: f64 = weights.iter().sum();
    let scaled: Vec<f64> = weights.iter().map(|w| w / total * denom as f64).collect();
    let mut counts: Vec<u32> = scaled.iter().map(|s| s.floor() as u32).collect();
    let assigned: u32 = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = scaled[i] - scaled[i].floor();
        let rj = scaled[j] - scaled[j].floor();
        rj.partial_cmp(&ri).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j))
    });
    for &i in order.iter().take((denom - assigned.min(denom)) as usize) {
        counts[i] += 1;
    }
    counts
        .into_iter()
        .map(|c| Rational::from_ratio(c as i64, denom as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/12").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("0.").is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&q(2, 4)), "1/2");
        assert_eq!(format_rational(&q(3, 1)), "3");
        assert_eq!(Probability::Float(0.25).to_string(), "0.25");
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.25, 1_000_000).unwrap(), q(1, 4));
        assert_eq!(rationalize(1.0 / 3.0, 1_000_000).unwrap(), q(1, 3));
        assert_eq!(rationalize(0.0, 10).unwrap(), q(0, 1));
        assert_eq!(rationalize(1.0, 10).unwrap(), q(1, 1));
    }

    #[test]
    fn rationalize_respects_cap_and_is_best() {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        let r = rationalize(x, 1000).unwrap();
        assert!(r.denom() <= &BigInt::from(1000));
        // Brute-force oracle: best p/q with q <= 1000.
        let mut best = f64::INFINITY;
        for d in 1..=1000i64 {
            let n = (x * d as f64).round();
            best = best.min((n / d as f64 - x).abs());
        }
        assert!((Scalar::to_f64(&r) - x).abs() <= best + 1e-15);
    }

    #[test]
    fn rounding_sums_to_one() {
        let r = round_to_denominator(&[0.1, 0.2, 0.3, 0.4], 64);
        let s = r.iter().fold(Rational::zero(), |acc, v| acc + v);
        assert_eq!(s, Rational::one());
        assert!(r.iter().all(|v| v.denom() <= &BigInt::from(64)));
    }

    #[test]
    fn probability_serde_keeps_representation() {
        let p: Probability = serde_json::from_str("\"1/3\"").unwrap();
        assert_eq!(p, Probability::Exact(q(1, 3)));
        let f: Probability = serde_json::from_str("0.5").unwrap();
        assert_eq!(f, Probability::Float(0.5));
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"1/3\"");
    }
}
