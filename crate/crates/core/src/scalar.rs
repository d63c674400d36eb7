//! Scalar field used by every tensor: exact rationals or IEEE doubles.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arithmetic mode of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rational" | "exact" => Ok(Mode::Rational),
            "float" | "f64" => Ok(Mode::Float),
            other => Err(format!("unknown arithmetic mode `{other}`")),
        }
    }
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A commutative field closed under the operations used by the tensor algebra.
///
/// The two implementations are [`f64`] and [`BigRational`]. Everything in this
/// crate is generic over `Scalar`, so the same formula code runs exactly or in
/// floating point.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// Parses a literal: integers, decimals, and `num/den` fractions.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Serialized form inside instance files and reports.
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Option<Self>;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    /// A random entry in `[-1, 1]`. Rationals are multiples of `1/16`, so every
    /// reduced denominator is a power of two no larger than 16.
    fn sample<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ratio(rng.gen_range(-16..=16), 16)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn parse_literal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().ok()?;
                let d: f64 = d.trim().parse().ok()?;
                (d != 0.0).then(|| n / d)
            }
            None => s.trim().parse().ok(),
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
    fn sample<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::String(s) => Self::parse_literal(s),
            _ => None,
        }
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(BigRational::new(n, d));
        }
        parse_decimal(s)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::String(s) => Self::parse_literal(s),
            serde_json::Value::Number(n) => n.as_i64().map(Self::from_i64),
            _ => None,
        }
    }
}

/// Exact value of a decimal literal such as `-1.25` or `3e-2`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar>(items: impl IntoIterator<Item = S>) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}
