use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{bridge, forms, Admissibility, ExactSeq, FinSeq, FormId, FormValue, NumericSeq};
use crate::error::{Error, Result};
use crate::rational::{format_rational, gauss, parse_rational};
use crate::trigpoly::HalfFreqPoly;

/// A sequence in either scalar mode, as read from or written to JSON
/// `{"lo": int, "hi": int, "values": [[n, re, im], ...]}`.
///
/// Exact entries are rational strings, numeric entries are floats.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeq {
    Exact(ExactSeq),
    Numeric(NumericSeq),
}

impl AnySeq {
    pub fn is_exact(&self) -> bool {
        matches!(self, AnySeq::Exact(_))
    }

    pub fn form(&self, id: FormId) -> Result<FormValue> {
        match self {
            AnySeq::Exact(u) => forms::form(u, id),
            AnySeq::Numeric(u) => forms::form(u, id),
        }
    }

    pub fn fourier(&self) -> Result<HalfFreqPoly> {
        match self {
            AnySeq::Exact(u) => Ok(bridge::fourier(u)),
            AnySeq::Numeric(_) => Err(Error::NonExactMode),
        }
    }

    pub fn exact(&self) -> Result<&ExactSeq> {
        match self {
            AnySeq::Exact(u) => Ok(u),
            AnySeq::Numeric(_) => Err(Error::NonExactMode),
        }
    }

    pub fn admissibility(&self) -> Admissibility {
        match self {
            AnySeq::Exact(u) => u.admissibility(),
            AnySeq::Numeric(u) => u.admissibility(),
        }
    }

    pub fn to_numeric(&self) -> NumericSeq {
        match self {
            AnySeq::Exact(u) => u.to_numeric(),
            AnySeq::Numeric(u) => u.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<AnySeq> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }
}

impl Serialize for AnySeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (lo, hi, values): (i64, i64, Vec<Value>) = match self {
            AnySeq::Exact(u) => (
                u.lo(),
                u.hi(),
                u.iter().map(|(n, v)| json!([n, format_rational(&v.re), format_rational(&v.im)])).collect(),
            ),
            AnySeq::Numeric(u) => (u.lo(), u.hi(), u.iter().map(|(n, v)| json!([n, v.re, v.im])).collect()),
        };
        json!({ "lo": lo, "hi": hi, "values": values }).serialize(s)
    }
}

#[derive(Deserialize)]
struct RawSeq {
    lo: i64,
    hi: i64,
    values: Vec<(i64, Value, Value)>,
}

impl<'de> Deserialize<'de> for AnySeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSeq::deserialize(d)?;
        if raw.hi < raw.lo - 1 {
            return Err(D::Error::custom(format!("empty window needs hi = lo - 1, got [{}, {}]", raw.lo, raw.hi)));
        }
        if let Some((n, _, _)) = raw.values.iter().find(|(n, _, _)| *n < raw.lo || *n > raw.hi) {
            return Err(D::Error::custom(format!("index {n} outside [{}, {}]", raw.lo, raw.hi)));
        }
        let exact = raw.values.iter().all(|(_, re, im)| re.is_string() && im.is_string());
        let numeric = raw.values.iter().all(|(_, re, im)| re.is_number() && im.is_number());
        if exact {
            let mut u = ExactSeq::zeros(raw.lo, raw.hi);
            for (n, re, im) in raw.values {
                let re = parse_rational(re.as_str().unwrap_or_default()).map_err(D::Error::custom)?;
                let im = parse_rational(im.as_str().unwrap_or_default()).map_err(D::Error::custom)?;
                u.set(n, gauss(re, im));
            }
            Ok(AnySeq::Exact(u))
        } else if numeric {
            let mut u: NumericSeq = FinSeq::zeros(raw.lo, raw.hi);
            for (n, re, im) in raw.values {
                u.set(n, Complex64::new(re.as_f64().unwrap_or(f64::NAN), im.as_f64().unwrap_or(f64::NAN)));
            }
            Ok(AnySeq::Numeric(u))
        } else {
            Err(D::Error::custom("values must be all rational strings or all numbers"))
        }
    }
}
