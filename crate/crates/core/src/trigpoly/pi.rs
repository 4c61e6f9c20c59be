//! Values `a + b·π` with rational `a`, `b`, the exact range of every integral
//! of a half-frequency trigonometric polynomial over `[−π, π]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{rational_to_f64, Rational};

/// Decimal digits of the first π enclosure; widened by doubling when a sign
/// cannot be decided.
pub const PI_DIGITS: u32 = 64;

fn arctan_inv_scaled(x: u64, scale: &BigInt) -> (BigInt, u64) {
    // Σ (−1)^j scale / ((2j+1)·x^{2j+1}); every floor division loses < 1 unit.
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        j += 1;
    }
    (sum, j + 1)
}

/// Rational interval `[lo, hi]` containing π, of width at most `10^{−digits}`.
pub fn pi_enclosure(digits: u32) -> (Rational, Rational) {
    let guard = 12;
    let scale = BigInt::from(10).pow(digits + guard);
    let (a, ta) = arctan_inv_scaled(5, &scale);
    let (b, tb) = arctan_inv_scaled(239, &scale);
    let approx = a * 16 - b * 4;
    // Each term is off by less than 3 units (truncated power and truncated
    // quotient); the alternating tail adds less than one more term.
    let err = BigInt::from(48 * (ta + 1) + 12 * (tb + 1));
    let lo = Rational::new(&approx - &err, scale.clone());
    let hi = Rational::new(&approx + &err, scale);
    (lo, hi)
}

fn default_enclosure() -> &'static (Rational, Rational) {
    static PI: OnceLock<(Rational, Rational)> = OnceLock::new();
    PI.get_or_init(|| pi_enclosure(PI_DIGITS))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiValue {
    #[serde(with = "crate::rational::serde_rational")]
    pub rat: Rational,
    #[serde(rename = "pi", with = "crate::rational::serde_rational")]
    pub pi_coeff: Rational,
}

impl PiValue {
    pub fn new(rat: Rational, pi_coeff: Rational) -> Self {
        PiValue { rat, pi_coeff }
    }

    pub fn zero() -> Self {
        PiValue::new(Rational::zero(), Rational::zero())
    }

    pub fn rational(rat: Rational) -> Self {
        PiValue::new(rat, Rational::zero())
    }

    pub fn pi_multiple(coeff: Rational) -> Self {
        PiValue::new(Rational::zero(), coeff)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.pi_coeff.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PiValue::new(&self.rat * c, &self.pi_coeff * c)
    }

    /// Exact sign. Componentwise zero test, then a π enclosure widened until
    /// the interval for `rat + pi_coeff·π` excludes zero.
    pub fn signum(&self) -> Ordering {
        if self.pi_coeff.is_zero() {
            return self.rat.cmp(&Rational::zero());
        }
        if self.rat.is_zero() {
            return self.pi_coeff.cmp(&Rational::zero());
        }
        let mut owned;
        let mut enclosure = default_enclosure();
        let mut digits = PI_DIGITS;
        loop {
            let (lo, hi) = enclosure;
            let (a, b) = (&self.rat + &self.pi_coeff * lo, &self.rat + &self.pi_coeff * hi);
            let (min, max) = if a <= b { (a, b) } else { (b, a) };
            if min.is_positive() {
                return Ordering::Greater;
            }
            if max.is_negative() {
                return Ordering::Less;
            }
            digits *= 2;
            owned = pi_enclosure(digits);
            enclosure = &owned;
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rat) + rational_to_f64(&self.pi_coeff) * std::f64::consts::PI
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.pi_coeff.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "({})π", self.pi_coeff),
            (false, false) => write!(f, "{} + ({})π", self.rat, self.pi_coeff),
        }
    }
}

impl PartialOrd for PiValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PiValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a PiValue> for &'a PiValue {
    type Output = PiValue;
    fn add(self, o: &PiValue) -> PiValue {
        PiValue::new(&self.rat + &o.rat, &self.pi_coeff + &o.pi_coeff)
    }
}

impl<'a> Sub<&'a PiValue> for &'a PiValue {
    type Output = PiValue;
    fn sub(self, o: &PiValue) -> PiValue {
        PiValue::new(&self.rat - &o.rat, &self.pi_coeff - &o.pi_coeff)
    }
}

impl Add for PiValue {
    type Output = PiValue;
    fn add(self, o: PiValue) -> PiValue {
        &self + &o
    }
}

impl Sub for PiValue {
    type Output = PiValue;
    fn sub(self, o: PiValue) -> PiValue {
        &self - &o
    }
}

impl Neg for PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        PiValue::new(-self.rat, -self.pi_coeff)
    }
}

impl Mul<&Rational> for &PiValue {
    type Output = PiValue;
    fn mul(self, c: &Rational) -> PiValue {
        self.scale(c)
    }
}

impl std::iter::Sum for PiValue {
    fn sum<I: Iterator<Item = PiValue>>(iter: I) -> PiValue {
        iter.fold(PiValue::zero(), |a, b| a + b)
    }
}

/// `re + i·im` with `re`, `im` in `ℚ + ℚπ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexPiValue {
    pub re: PiValue,
    pub im: PiValue,
}

impl ComplexPiValue {
    pub fn zero() -> Self {
        ComplexPiValue { re: PiValue::zero(), im: PiValue::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl Add for ComplexPiValue {
    type Output = ComplexPiValue;
    fn add(self, o: ComplexPiValue) -> ComplexPiValue {
        ComplexPiValue { re: self.re + o.re, im: self.im + o.im }
    }
}

/// `2π`.
pub fn two_pi() -> PiValue {
    PiValue::pi_multiple(Rational::from_integer(BigInt::from(2)))
}

pub fn pi() -> PiValue {
    PiValue::pi_multiple(Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn enclosure_contains_pi() {
        let (lo, hi) = pi_enclosure(30);
        let lo_s = rational_to_f64(&lo);
        let hi_s = rational_to_f64(&hi);
        assert!(lo_s <= std::f64::consts::PI + 1e-15 && hi_s >= std::f64::consts::PI - 1e-15);
        assert!(&hi - &lo < rat(1, 1_000_000_000_000_000_000));
        // 355/113 exceeds π by about 2.7e-7.
        assert!(hi < rat(355, 113));
        assert!(lo > rat(314159265358979, 100000000000000));
    }

    #[test]
    fn signs() {
        assert_eq!(PiValue::zero().signum(), Ordering::Equal);
        assert_eq!(PiValue::new(rat(-3, 1), rat(1, 1)).signum(), Ordering::Greater);
        assert_eq!(PiValue::new(rat(-22, 7), rat(1, 1)).signum(), Ordering::Less);
        assert_eq!(PiValue::new(rat(355, 113), rat(-1, 1)).signum(), Ordering::Greater);
        // Needs more than the default 64 digits.
        let (lo, _) = pi_enclosure(90);
        assert_eq!(PiValue::new(-lo, rat(1, 1)).signum(), Ordering::Greater);
    }

    #[test]
    fn ordering_and_display() {
        let a = PiValue::pi_multiple(rat(7, 8));
        let b = PiValue::rational(rat(2, 1));
        assert!(a > b);
        assert_eq!(a.to_string(), "(7/8)π");
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"rat":"0/1","pi":"7/8"}"#);
    }
}
