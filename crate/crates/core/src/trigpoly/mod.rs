//! Trigonometric polynomials `Σ c_k e^{ikx/2}` on the half-integer frequency
//! lattice, with Gaussian-rational coefficients and exact integration over
//! `[−π, π]`.
//!
//! A stored index `k` stands for the frequency `k/2`, so the integer lattice
//! (2π-periodic functions) is exactly the set of polynomials whose indices are
//! all even.

mod lemmas;
mod pi;
mod random;

pub use lemmas::{
    verify_double_sine_bound, verify_mode_integrals, verify_sine_product_expansion, verify_weighted_sine_bound,
    verify_zero_mean_expansion_bound, verify_zero_mean_sine_bound, ExpansionReport, MarginReport, ModeReport,
    ModeCheck,
};
pub use pi::{pi, pi_enclosure, two_pi, ComplexPiValue, PiValue, PI_DIGITS};
pub use random::{project_weighted_zero_mean, project_zero_mean, random_poly, PolyDistribution};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational, rat, rat_int, GaussianRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalfFreqPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl HalfFreqPoly {
    pub fn zero() -> Self {
        HalfFreqPoly::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        HalfFreqPoly::monomial(0, c)
    }

    pub fn one() -> Self {
        HalfFreqPoly::constant(Complex::one())
    }

    /// `c·e^{i·index·x/2}`.
    pub fn monomial(index: i64, c: GaussianRational) -> Self {
        let mut p = HalfFreqPoly::zero();
        p.add_term(index, c);
        p
    }

    /// `e^{inx}`.
    pub fn exp_int(n: i64) -> Self {
        HalfFreqPoly::monomial(2 * n, Complex::one())
    }

    /// `sin(x/2) = (e^{ix/2} − e^{−ix/2}) / 2i`.
    pub fn sin_half() -> Self {
        let mut p = HalfFreqPoly::zero();
        p.add_term(1, Complex::new(Rational::zero(), rat(-1, 2)));
        p.add_term(-1, Complex::new(Rational::zero(), rat(1, 2)));
        p
    }

    pub fn cos_half() -> Self {
        let mut p = HalfFreqPoly::zero();
        p.add_term(1, Complex::new(rat(1, 2), Rational::zero()));
        p.add_term(-1, Complex::new(rat(1, 2), Rational::zero()));
        p
    }

    pub fn cos_x() -> Self {
        let mut p = HalfFreqPoly::zero();
        p.add_term(2, Complex::new(rat(1, 2), Rational::zero()));
        p.add_term(-2, Complex::new(rat(1, 2), Rational::zero()));
        p
    }

    /// `sin^{power}(x/2)`.
    pub fn sin_half_pow(power: u32) -> Self {
        let s = HalfFreqPoly::sin_half();
        (0..power).fold(HalfFreqPoly::one(), |acc, _| &acc * &s)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, GaussianRational)>) -> Self {
        let mut p = HalfFreqPoly::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Adds `c` to the coefficient at `index`, dropping it if it cancels.
    pub fn add_term(&mut self, index: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index).or_insert_with(Complex::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn coeff(&self, index: i64) -> GaussianRational {
        self.coeffs.get(&index).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All indices even: the function and its derivatives are 2π-periodic.
    pub fn is_integer_lattice(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        HalfFreqPoly::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    pub fn scale_real(&self, c: &Rational) -> Self {
        HalfFreqPoly::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    /// Term-wise `d/dx`: the coefficient at index `k` is multiplied by `i·k/2`.
    pub fn derivative(&self) -> Self {
        HalfFreqPoly::from_terms(self.terms().map(|(k, c)| {
            let f = rat(k, 2);
            (k, Complex::new(-&c.im * &f, &c.re * &f))
        }))
    }

    pub fn nth_derivative(&self, n: u32) -> Self {
        if n == 0 {
            return self.clone();
        }
        // (i·k/2)^n in one step instead of n passes.
        HalfFreqPoly::from_terms(self.terms().map(|(k, c)| {
            let mag = num_traits::pow(rat(k, 2), n as usize);
            let unit = match n % 4 {
                0 => Complex::new(Rational::one(), Rational::zero()),
                1 => Complex::new(Rational::zero(), Rational::one()),
                2 => Complex::new(-Rational::one(), Rational::zero()),
                _ => Complex::new(Rational::zero(), -Rational::one()),
            };
            (k, c * unit * mag)
        }))
    }

    /// Pointwise complex conjugate: index `k` maps to `−k`.
    pub fn conjugate(&self) -> Self {
        HalfFreqPoly::from_terms(self.terms().map(|(k, c)| (-k, c.conj())))
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = HalfFreqPoly::zero();
        for (j, a) in self.terms() {
            for (l, b) in other.terms() {
                out.add_term(j + l, a * b);
            }
        }
        out
    }

    pub fn mod_squared(&self) -> Self {
        self.multiply(&self.conjugate())
    }

    /// Exact `∫_{−π}^{π}`: index 0 gives `2π·c₀`, other even indices vanish and
    /// an odd index `k` contributes `(4/k)·(−1)^{(k−1)/2}·c_k`.
    pub fn integrate(&self) -> ComplexPiValue {
        let mut re = PiValue::zero();
        let mut im = PiValue::zero();
        for (k, c) in self.terms() {
            if k == 0 {
                re = &re + &PiValue::pi_multiple(&c.re * rat(2, 1));
                im = &im + &PiValue::pi_multiple(&c.im * rat(2, 1));
            } else if k % 2 != 0 {
                let w = odd_mode_integral(k);
                re = &re + &PiValue::rational(&c.re * &w);
                im = &im + &PiValue::rational(&c.im * &w);
            }
        }
        ComplexPiValue { re, im }
    }

    /// `∫|p|²`, evaluated pairwise without forming the product polynomial.
    pub fn norm_sq_integral(&self) -> PiValue {
        let mut pi_part = Rational::zero();
        let mut rat_part = Rational::zero();
        let terms: Vec<_> = self.terms().collect();
        for (j, a) in &terms {
            pi_part += a.norm_sqr() * rat(2, 1);
            for (l, b) in &terms {
                let d = j - l;
                if d % 2 != 0 {
                    // Re(a·conj(b)); the imaginary parts cancel between (j,l) and (l,j).
                    rat_part += (&a.re * &b.re + &a.im * &b.im) * odd_mode_integral(d);
                }
            }
        }
        PiValue::new(rat_part, pi_part)
    }

    /// `∫|p|²·w` for a real-valued weight `w`.
    pub fn weighted_norm_sq_integral(&self, weight: &HalfFreqPoly) -> PiValue {
        let v = self.mod_squared().multiply(weight).integrate();
        debug_assert!(v.is_real(), "real weight must give a real integral");
        v.re
    }

    pub fn to_json_terms(&self) -> Vec<(i64, String, String)> {
        self.terms().map(|(k, c)| (k, format_rational(&c.re), format_rational(&c.im))).collect()
    }
}

/// `∫_{−π}^{π} e^{ikx/2} dx` for odd `k`.
fn odd_mode_integral(k: i64) -> Rational {
    let sign = if (k - 1).rem_euclid(4) == 0 { 1 } else { -1 };
    rat(4 * sign, 1) / rat_int(k)
}

impl<'a> Add<&'a HalfFreqPoly> for &'a HalfFreqPoly {
    type Output = HalfFreqPoly;
    fn add(self, o: &HalfFreqPoly) -> HalfFreqPoly {
        let mut out = self.clone();
        for (k, c) in o.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a HalfFreqPoly> for &'a HalfFreqPoly {
    type Output = HalfFreqPoly;
    fn sub(self, o: &HalfFreqPoly) -> HalfFreqPoly {
        let mut out = self.clone();
        for (k, c) in o.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a HalfFreqPoly> for &'a HalfFreqPoly {
    type Output = HalfFreqPoly;
    fn mul(self, o: &HalfFreqPoly) -> HalfFreqPoly {
        self.multiply(o)
    }
}

impl Neg for HalfFreqPoly {
    type Output = HalfFreqPoly;
    fn neg(self) -> HalfFreqPoly {
        HalfFreqPoly::from_terms(self.coeffs.into_iter().map(|(k, c)| (k, -c)))
    }
}

impl Serialize for HalfFreqPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HalfFreqPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<(i64, String, String)> = Vec::deserialize(d)?;
        let mut p = HalfFreqPoly::zero();
        for (k, re, im) in raw {
            let re = parse_rational(&re).map_err(D::Error::custom)?;
            let im = parse_rational(&im).map_err(D::Error::custom)?;
            p.add_term(k, Complex::new(re, im));
        }
        Ok(p)
    }
}
