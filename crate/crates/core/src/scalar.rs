//! Numeric abstraction shared by the metric, index and closed-form code.
//!
//! Everything that touches a resistance value or a probability is written
//! against [`Scalar`], so the same routine runs in exact rational mode
//! (`BigRational`, `Ratio<i128>`) and in floating point (`f64`, `f32`).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact rational used as the source of truth for index values and moments.
pub type Exact = BigRational;

pub trait Scalar: Num + Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    fn from_i128(v: i128) -> Self;

    /// Converts an exact rational into this scalar (rounding for floats).
    fn from_exact(q: &Exact) -> Self;

    fn to_f64(&self) -> f64;

    /// `true` when arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// `"p/q"` for exact types, shortest round-trip decimal for floats.
    fn to_text(&self) -> String;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i128(numer as i128) / Self::from_i128(denom as i128)
    }

    fn from_u64(v: u64) -> Self {
        Self::from_i128(v as i128)
    }
}

impl Scalar for f64 {
    fn from_i128(v: i128) -> Self {
        v as f64
    }

    fn from_exact(q: &Exact) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }

    fn to_text(&self) -> String {
        format!("{}", self)
    }
}

impl Scalar for f32 {
    fn from_i128(v: i128) -> Self {
        v as f32
    }

    fn from_exact(q: &Exact) -> Self {
        ToPrimitive::to_f32(q).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn is_exact() -> bool {
        false
    }

    fn to_text(&self) -> String {
        format!("{}", self)
    }
}

impl Scalar for BigRational {
    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_exact(q: &Exact) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn to_text(&self) -> String {
        format_exact(self)
    }
}

impl Scalar for Ratio<i128> {
    fn from_i128(v: i128) -> Self {
        Ratio::from_integer(v)
    }

    /// Panics if the value does not fit in `i128`.
    fn from_exact(q: &Exact) -> Self {
        let numer = q.numer().to_i128().expect("numerator exceeds i128");
        let denom = q.denom().to_i128().expect("denominator exceeds i128");
        Ratio::new(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Builds an exact rational `numer / denom`.
pub fn exact(numer: i64, denom: i64) -> Exact {
    Exact::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn exact_int(v: i128) -> Exact {
    Exact::from_integer(BigInt::from(v))
}

/// Serializes an exact rational as `"p/q"`, always with an explicit denominator.
pub fn format_exact(q: &Exact) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or a plain integer into an exact rational.
pub fn parse_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Exact::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Exact::from_integer(p))
        }
    }
}

/// Parses a plain decimal literal such as `"0.25"` into the exact rational it
/// denotes. Exponent notation is not accepted.
pub fn parse_decimal_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let q = Exact::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Relative closeness with the `max(1, |reference|)` floor used throughout
/// the oracle comparisons.
pub fn close_rel(value: f64, reference: f64, tol: f64) -> bool {
    (value - reference).abs() <= tol * reference.abs().max(1.0)
}
