//! Exact rationals with a machine-word fast path.
//!
//! [`Rational`] stores a reduced `i64` fraction while numerator and
//! denominator fit, and a [`BigRational`] otherwise. Every operation is
//! exact: word arithmetic uses checked operations and falls back to big
//! integers on overflow, and big results that fit are demoted again.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::scalar::{Mode, Scalar};

/// Exact rational number.
///
/// The representation is canonical: a value that fits a reduced `i64`
/// fraction whose numerator is not `i64::MIN` is always stored small, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    /// `numer / denom`; panics if `denom` is zero.
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        Self::from_big(BigRational::new(numer, denom))
    }

    pub fn from_integer(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }

    pub fn from_big(v: BigRational) -> Self {
        match (v.numer().to_i64(), v.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Self(Repr::Small(Ratio::new_raw(n, d))),
            _ => Self(Repr::Big(v)),
        }
    }

    fn from_small(v: Ratio<i64>) -> Self {
        if *v.numer() == i64::MIN {
            Self(Repr::Big(widen(&v)))
        } else {
            Self(Repr::Small(v))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => widen(v),
            Repr::Big(v) => v.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v.numer()),
            Repr::Big(v) => v.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v.denom()),
            Repr::Big(v) => v.denom().clone(),
        }
    }

    /// Whether the value is held in the machine-word representation.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(_))
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(v) => {
                let (n, d) = (*v.numer(), *v.denom());
                assert!(n != 0, "division by zero");
                // n != i64::MIN, so both negations are in range
                if n < 0 {
                    Self::from_small(Ratio::new_raw(-d, -n))
                } else {
                    Self::from_small(Ratio::new_raw(d, n))
                }
            }
            Repr::Big(v) => Self::from_big(v.recip()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v.numer() < 0,
            Repr::Big(v) => v.is_negative(),
        }
    }
}

fn widen(v: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

fn combine(
    a: &Rational,
    b: &Rational,
    small: impl FnOnce(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
    big: impl FnOnce(BigRational, BigRational) -> BigRational,
) -> Rational {
    if let (Repr::Small(x), Repr::Small(y)) = (&a.0, &b.0) {
        if let Some(r) = small(x, y) {
            return Rational::from_small(r);
        }
    }
    Rational::from_big(big(a.to_big(), b.to_big()))
}

fn add(a: &Rational, b: &Rational) -> Rational {
    combine(a, b, |x, y| x.checked_add(y), |x, y| x + y)
}

fn sub(a: &Rational, b: &Rational) -> Rational {
    combine(a, b, |x, y| x.checked_sub(y), |x, y| x - y)
}

fn mul(a: &Rational, b: &Rational) -> Rational {
    combine(a, b, |x, y| x.checked_mul(y), |x, y| x * y)
}

fn div(a: &Rational, b: &Rational) -> Rational {
    mul(a, &b.recip())
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $f:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $assign_tr for Rational {
            fn $assign(&mut self, rhs: Rational) {
                *self = $f(self, &rhs);
            }
        }
        impl<'a> $assign_tr<&'a Rational> for Rational {
            fn $assign(&mut self, rhs: &'a Rational) {
                *self = $f(self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add);
binop!(Sub, sub, SubAssign, sub_assign, sub);
binop!(Mul, mul, MulAssign, mul_assign, mul);
binop!(Div, div, DivAssign, div_assign, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            // numerators are never i64::MIN, so negation is in range
            Repr::Small(v) => Rational(Repr::Small(Ratio::new_raw(-*v.numer(), *v.denom()))),
            Repr::Big(v) => Rational::from_big(-v),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Self(Repr::Small(Ratio::new_raw(0, 1)))
    }
    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v.numer() == 0,
            Repr::Big(_) => false,
        }
    }
}

impl One for Rational {
    fn one() -> Self {
        Self(Repr::Small(Ratio::new_raw(1, 1)))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_small(Ratio::from_integer(v))
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Self::from_big(v)
    }
}

impl From<Rational> for BigRational {
    fn from(v: Rational) -> Self {
        v.to_big()
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.0 {
            Repr::Small(v) => Display::fmt(v, f),
            Repr::Big(v) => Display::fmt(v, f),
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(self, f)
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => v.to_i64(),
            Repr::Big(v) => v.to_i64(),
        }
    }
    fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => v.to_u64(),
            Repr::Big(v) => v.to_u64(),
        }
    }
    fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(v) => ToPrimitive::to_f64(v),
            Repr::Big(v) => ToPrimitive::to_f64(v),
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        v.into()
    }
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        match (num.checked_neg(), den.checked_neg()) {
            (Some(_), Some(_)) => Self::from_small(Ratio::new(num, den)),
            _ => Self::new(num.into(), den.into()),
        }
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
        BigRational::parse_literal(s).map(Self::from_big)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        BigRational::from_json(v).map(Self::from_big)
    }
}
