//! Exact checks of the sine-weighted integral identities and lower bounds
//! behind the weighted Hardy and Rellich inequalities.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{HalfFreqPoly, PiValue};
use crate::combinatorics::constant_table;
use crate::error::{Error, Result};
use crate::rational::{rat, rat_int, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub k: u32,
    pub lhs: PiValue,
    pub rhs: PiValue,
    pub equal: bool,
}

/// Outcome of a lower-bound check: `margin = lhs − rhs`, sign decided exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub lhs: PiValue,
    pub rhs: PiValue,
    pub margin: PiValue,
    /// `"positive"`, `"zero"` or `"negative"`.
    pub sign: String,
    pub holds: bool,
}

impl MarginReport {
    fn new(lhs: PiValue, rhs: PiValue) -> Self {
        let margin = &lhs - &rhs;
        let ord = margin.signum();
        let sign = match ord {
            Ordering::Greater => "positive",
            Ordering::Equal => "zero",
            Ordering::Less => "negative",
        };
        MarginReport { lhs, rhs, sign: sign.to_string(), holds: ord != Ordering::Less, margin }
    }
}

fn require_lattice(u: &HalfFreqPoly) -> Result<()> {
    if u.is_integer_lattice() {
        Ok(())
    } else {
        Err(Error::NotIntegerLattice)
    }
}

fn require_zero_mean(u: &HalfFreqPoly) -> Result<()> {
    let c0 = u.coeff(0);
    if c0.is_zero() {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!("average must vanish, constant coefficient is {} + {}i", c0.re, c0.im)))
    }
}

/// `∫|dᵏ(u·sin(x/2))|² = Σᵢ αᵢ∫|dⁱu|² + Σᵢ βᵢ∫|dⁱu|²sin²(x/2)`, compared as
/// exact values of `ℚ + ℚπ`.
pub fn verify_sine_product_expansion(u: &HalfFreqPoly, k: u32) -> Result<ExpansionReport> {
    require_lattice(u)?;
    let table = constant_table(k)?;
    let lhs = u.multiply(&HalfFreqPoly::sin_half()).nth_derivative(k).norm_sq_integral();
    let s2 = HalfFreqPoly::sin_half_pow(2);
    let mut rhs = PiValue::zero();
    for i in 0..=k {
        let di = u.nth_derivative(i);
        rhs = &rhs + &di.norm_sq_integral().scale(table.alpha(i));
        rhs = &rhs + &di.weighted_norm_sq_integral(&s2).scale(table.beta(i));
    }
    Ok(ExpansionReport { k, equal: lhs == rhs, lhs, rhs })
}

/// `∫|u′|²sin²(x/2) ≥ (1/16)∫|u|²` for zero-average `u`.
pub fn verify_zero_mean_sine_bound(u: &HalfFreqPoly) -> Result<MarginReport> {
    require_lattice(u)?;
    require_zero_mean(u)?;
    let lhs = u.derivative().weighted_norm_sq_integral(&HalfFreqPoly::sin_half_pow(2));
    let rhs = u.norm_sq_integral().scale(&rat(1, 16));
    Ok(MarginReport::new(lhs, rhs))
}

/// `∫|dᵏ(u·sin(x/2))|² ≥ Σ_{i<k} (αᵢ + βᵢ₊₁/16)∫|dⁱu|²` for zero-average `u`.
pub fn verify_zero_mean_expansion_bound(u: &HalfFreqPoly, k: u32) -> Result<MarginReport> {
    require_lattice(u)?;
    require_zero_mean(u)?;
    let table = constant_table(k)?;
    let lhs = u.multiply(&HalfFreqPoly::sin_half()).nth_derivative(k).norm_sq_integral();
    let rhs = (0..k)
        .map(|i| {
            let c = table.alpha(i) + table.beta(i + 1) * rat(1, 16);
            u.nth_derivative(i).norm_sq_integral().scale(&c)
        })
        .sum();
    Ok(MarginReport::new(lhs, rhs))
}

/// `∫|u′|²sin^{2k}(x/2) ≥ ((k−1)/2)∫|u|²sin^{2k−2}(x/2)` under
/// `∫u·sin^{2k−2}(x/2) = 0`, for `k ≥ 2`.
pub fn verify_weighted_sine_bound(u: &HalfFreqPoly, k: u32) -> Result<MarginReport> {
    if k < 2 {
        return Err(Error::ParameterRange(format!("weighted sine bound needs k ≥ 2, got {k}")));
    }
    require_lattice(u)?;
    let low = HalfFreqPoly::sin_half_pow(2 * k - 2);
    let constraint = u.multiply(&low).integrate();
    if !constraint.is_zero() {
        return Err(Error::Inadmissible(format!(
            "weighted average ∫u·sin^{}(x/2) must vanish, got {} + i({})",
            2 * k - 2,
            constraint.re,
            constraint.im
        )));
    }
    let lhs = u.derivative().weighted_norm_sq_integral(&HalfFreqPoly::sin_half_pow(2 * k));
    let rhs = u.weighted_norm_sq_integral(&low).scale(&rat(k as i64 - 1, 2));
    Ok(MarginReport::new(lhs, rhs))
}

/// `∫|dᵏ(u·sin²(x/2))|² ≥ α^k_{k−1}(α^{k−1}_{k−2} + β^{k−1}_{k−1}/16)∫|d^{k−2}u|²`
/// for zero-average `u`, `k ≥ 2`.
pub fn verify_double_sine_bound(u: &HalfFreqPoly, k: u32) -> Result<MarginReport> {
    if k < 2 {
        return Err(Error::ParameterRange(format!("double sine bound needs k ≥ 2, got {k}")));
    }
    require_lattice(u)?;
    require_zero_mean(u)?;
    let outer = constant_table(k)?;
    let inner = constant_table(k - 1)?;
    let c = outer.alpha(k - 1) * (inner.alpha(k - 2) + inner.beta(k - 1) * rat(1, 16));
    let lhs = u.multiply(&HalfFreqPoly::sin_half_pow(2)).nth_derivative(k).norm_sq_integral();
    let rhs = u.nth_derivative(k - 2).norm_sq_integral().scale(&c);
    Ok(MarginReport::new(lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCheck {
    pub lhs: PiValue,
    pub rhs: PiValue,
    pub equal: bool,
}

impl ModeCheck {
    fn new(lhs: PiValue, rhs: PiValue) -> Self {
        ModeCheck { equal: lhs == rhs, lhs, rhs }
    }
}

/// Closed forms for the single mode `u = e^{inx/2}·sin(x/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub n: i64,
    pub m: u32,
    pub k: u32,
    /// `4ᵐ∫|dᵐu|² = (π/2)((n+1)^{2m} + (n−1)^{2m})`
    pub energy: ModeCheck,
    /// `4ᵐ∫|dᵐu|²cos x = −(π/2)(n²−1)ᵐ`
    pub cosine_energy: ModeCheck,
    /// `4ᵏ∫|dᵏ(u·sin(x/2))|² = (π/8)((n+2)^{2k} + (n−2)^{2k} + 4n^{2k})`
    pub sine_energy: ModeCheck,
}

impl ModeReport {
    pub fn passed(&self) -> bool {
        self.energy.equal && self.cosine_energy.equal && self.sine_energy.equal
    }
}

fn ipow(base: i64, e: u32) -> Rational {
    rat_int(num_bigint::BigInt::from(base).pow(e))
}

pub fn verify_mode_integrals(n: i64, m: u32, k: u32) -> Result<ModeReport> {
    let u = HalfFreqPoly::monomial(n, crate::rational::gauss_int(1, 0)).multiply(&HalfFreqPoly::sin_half());
    let four_m = ipow(4, m);
    let dm = u.nth_derivative(m);

    let energy = ModeCheck::new(
        dm.norm_sq_integral().scale(&four_m),
        PiValue::pi_multiple((ipow(n + 1, 2 * m) + ipow(n - 1, 2 * m)) * rat(1, 2)),
    );
    let cosine_energy = ModeCheck::new(
        dm.weighted_norm_sq_integral(&HalfFreqPoly::cos_x()).scale(&four_m),
        PiValue::pi_multiple(-ipow(n * n - 1, m) * rat(1, 2)),
    );
    let sine_energy = ModeCheck::new(
        u.multiply(&HalfFreqPoly::sin_half()).nth_derivative(k).norm_sq_integral().scale(&ipow(4, k)),
        PiValue::pi_multiple(
            (ipow(n + 2, 2 * k) + ipow(n - 2, 2 * k) + ipow(n, 2 * k) * rat(4, 1)) * rat(1, 8),
        ),
    );
    Ok(ModeReport { n, m, k, energy, cosine_energy, sine_energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{gauss_int, gauss_real};

    fn pi_times(num: i64, den: i64) -> PiValue {
        PiValue::pi_multiple(rat(num, den))
    }

    #[test]
    fn expansion_hand_cases() {
        let r = verify_sine_product_expansion(&HalfFreqPoly::one(), 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, pi_times(1, 4));
        let r = verify_sine_product_expansion(&HalfFreqPoly::exp_int(1), 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, pi_times(5, 4));
    }

    #[test]
    fn expansion_rejects_half_frequencies() {
        assert_eq!(verify_sine_product_expansion(&HalfFreqPoly::sin_half(), 2), Err(Error::NotIntegerLattice));
    }

    #[test]
    fn zero_mean_bound_cases() {
        let r = verify_zero_mean_sine_bound(&HalfFreqPoly::zero()).unwrap();
        assert_eq!(r.margin, PiValue::zero());
        assert_eq!(r.sign, "zero");
        let r = verify_zero_mean_sine_bound(&HalfFreqPoly::exp_int(1)).unwrap();
        assert_eq!(r.margin, pi_times(7, 8));
        assert!(r.holds);
        assert!(matches!(verify_zero_mean_sine_bound(&HalfFreqPoly::one()), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn zero_input_gives_zero_margins() {
        let z = HalfFreqPoly::zero();
        for k in 2..=4 {
            assert!(verify_zero_mean_expansion_bound(&z, k).unwrap().margin.is_zero());
            assert!(verify_weighted_sine_bound(&z, k).unwrap().margin.is_zero());
            assert!(verify_double_sine_bound(&z, k).unwrap().margin.is_zero());
        }
    }

    #[test]
    fn weighted_bound_with_solved_constraint() {
        // ∫(e^{ix} − c)·sin²(x/2) = 2π(−1/4 − c/2) vanishes at c = −1/2.
        let u = &HalfFreqPoly::exp_int(1) + &HalfFreqPoly::constant(gauss_real(rat(1, 2)));
        let r = verify_weighted_sine_bound(&u, 2).unwrap();
        assert!(r.holds);
        let bad = &HalfFreqPoly::exp_int(1) + &HalfFreqPoly::constant(gauss_int(1, 0));
        assert!(matches!(verify_weighted_sine_bound(&bad, 2), Err(Error::Inadmissible(_))));
        assert!(matches!(verify_weighted_sine_bound(&u, 1), Err(Error::ParameterRange(_))));
    }

    #[test]
    fn mode_integral_small_cases() {
        let r = verify_mode_integrals(0, 0, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.energy.lhs, pi_times(1, 1));
        assert_eq!(r.cosine_energy.lhs, pi_times(-1, 2));
    }
}
