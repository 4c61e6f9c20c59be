//! Seeded random test functions and the exact projections that make them
//! admissible for the zero-average bounds.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::HalfFreqPoly;
use crate::rational::{GaussianRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyDistribution {
    /// Indices are drawn from `[−index_bound, index_bound]`.
    pub index_bound: i64,
    /// Only even indices when set.
    pub integer_lattice: bool,
    pub max_terms: usize,
    /// Bound on numerators and denominators of coefficient parts.
    pub height: i64,
}

impl Default for PolyDistribution {
    fn default() -> Self {
        PolyDistribution { index_bound: 12, integer_lattice: true, max_terms: 13, height: 20 }
    }
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R, height: i64) -> Rational {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=height);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, height: i64) -> GaussianRational {
    Complex::new(random_rational(rng, height), random_rational(rng, height))
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, dist: &PolyDistribution) -> HalfFreqPoly {
    let candidates: Vec<i64> = (-dist.index_bound..=dist.index_bound)
        .filter(|k| !dist.integer_lattice || k % 2 == 0)
        .collect();
    let size = rng.gen_range(1..=dist.max_terms.min(candidates.len()));
    let chosen: Vec<i64> = candidates.choose_multiple(rng, size).copied().collect();
    HalfFreqPoly::from_terms(chosen.into_iter().map(|k| (k, random_gaussian(rng, dist.height))))
}

/// Removes the constant mode, the unique multiple of `1` that restores a zero average.
pub fn project_zero_mean(p: &HalfFreqPoly) -> HalfFreqPoly {
    let c0 = p.coeff(0);
    let mut out = p.clone();
    out.add_term(0, -c0);
    out
}

/// Shifts the constant mode so that `∫p·sin^{2k−2}(x/2) = 0`; requires `p`
/// on the integer lattice, where that integral is `2π` times a coefficient.
pub fn project_weighted_zero_mean(p: &HalfFreqPoly, k: u32) -> HalfFreqPoly {
    assert!(p.is_integer_lattice(), "projection is defined on the integer lattice");
    let w = HalfFreqPoly::sin_half_pow(2 * k - 2);
    let current = p.multiply(&w).coeff(0);
    let w0 = w.coeff(0);
    if current.is_zero() {
        return p.clone();
    }
    let shift = -(current / w0);
    let mut out = p.clone();
    out.add_term(0, shift);
    out
}
