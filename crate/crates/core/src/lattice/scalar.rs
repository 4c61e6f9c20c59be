use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational, rat_int, rational_to_f64, GaussianRational, Rational};

/// Real values of quadratic forms: `Rational` in exact mode, `f64` in numeric mode.
pub trait FormReal:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn into_form_value(self) -> FormValue;

    fn powi(&self, e: i32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * self.clone();
        }
        if e < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl FormReal for Rational {
    fn from_int(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn into_form_value(self) -> FormValue {
        FormValue::Exact(self)
    }
}

impl FormReal for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn into_form_value(self) -> FormValue {
        FormValue::Numeric(self)
    }
    fn powi(&self, e: i32) -> Self {
        f64::powi(*self, e)
    }
}

/// Sequence values: Gaussian rationals (exact) or `Complex64` (numeric).
pub trait SeqScalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    type Real: FormReal;
    const EXACT: bool;

    fn abs_sq(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_real(<Self::Real as FormReal>::from_int(n))
    }
}

impl SeqScalar for GaussianRational {
    type Real = Rational;
    const EXACT: bool = true;

    fn abs_sq(&self) -> Rational {
        self.norm_sqr()
    }
    fn from_real(r: Rational) -> Self {
        GaussianRational::new(r, Rational::zero())
    }
}

impl SeqScalar for Complex64 {
    type Real = f64;
    const EXACT: bool = false;

    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }
    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }
}

/// Value of a quadratic form in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum FormValue {
    Exact(Rational),
    Numeric(f64),
}

impl FormValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            FormValue::Exact(r) => rational_to_f64(r),
            FormValue::Numeric(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            FormValue::Exact(r) => Some(r),
            FormValue::Numeric(_) => None,
        }
    }
}

/// Exact values serialize as `"num/den"` strings, numeric ones as JSON numbers.
impl Serialize for FormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FormValue::Exact(r) => s.serialize_str(&format_rational(r)),
            FormValue::Numeric(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for FormValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => parse_rational(&s).map(FormValue::Exact).map_err(D::Error::custom),
            serde_json::Value::Number(n) => {
                n.as_f64().map(FormValue::Numeric).ok_or_else(|| D::Error::custom("non-finite number"))
            }
            other => Err(D::Error::custom(format!("expected rational string or number, got {other}"))),
        }
    }
}
