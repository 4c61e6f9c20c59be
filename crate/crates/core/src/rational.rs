//! Exact scalar types shared by every module: arbitrary-precision rationals
//! and Gaussian rationals, with the `"num/den"` text encoding used in reports.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `re + i·im` with rational parts.
pub type GaussianRational = Complex<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn gauss(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gauss_real(re: Rational) -> GaussianRational {
    Complex::new(re, Rational::zero())
}

pub fn gauss_int(re: i64, im: i64) -> GaussianRational {
    Complex::new(rat_int(re), rat_int(im))
}

/// Always `num/den`, including integers (`3/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Rational::new(n, d)
        }
        None => rat_int(s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?),
    };
    Ok(parsed)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to shifting both parts into f64 range.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        Rational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        Rational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let n = scaled.numer().to_f64().unwrap_or(0.0);
    let d = scaled.denom().to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi(shift as i32)
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn pow_int(base: &Rational, exp: i32) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn sign_factor(exp: i64) -> Rational {
    if exp.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_with_denominator() {
        assert_eq!(format_rational(&rat(6, 2)), "3/1");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rational("33/16").unwrap(), rat(33, 16));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn converts_huge_rationals_to_f64() {
        let big = Rational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((rational_to_f64(&big) - 3.0).abs() < 1e-12);
        assert_eq!(rational_to_f64(&rat(1, 4)), 0.25);
    }
}
