use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{form_value, ExactSeq, FinSeq, FormId};
use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::rational::{gauss_real, pow_int, rat, rat_int, GaussianRational, Rational};
use crate::trigpoly::{HalfFreqPoly, PiValue};

/// Unnormalized transform `Σ u(n)e^{−inx}`.
pub fn fourier(u: &ExactSeq) -> HalfFreqPoly {
    HalfFreqPoly::from_terms(u.iter().map(|(n, v)| (-2 * n, v.clone())))
}

/// Reads a sequence back from an integer-lattice polynomial.
pub fn inverse_fourier(g: &HalfFreqPoly) -> Result<ExactSeq> {
    if !g.is_integer_lattice() {
        return Err(Error::NotIntegerLattice);
    }
    let mut u = ExactSeq::zero();
    for (idx, c) in g.terms() {
        u.set(-idx / 2, c.clone());
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeCheck {
    pub name: String,
    /// `2π` times the lattice sum.
    pub sequence_side: PiValue,
    pub fourier_side: PiValue,
    pub equal: bool,
}

impl BridgeCheck {
    fn new(name: String, sum: Rational, fourier_side: PiValue) -> Self {
        let sequence_side = PiValue::pi_multiple(sum * rat(2, 1));
        let equal = sequence_side == fourier_side;
        BridgeCheck { name, sequence_side, fourier_side, equal }
    }
}

/// Polynomial identity `G(Δʲu) = 4ʲ sin^{2j}(x/2)·G(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolCheck {
    pub power: u32,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub k: u32,
    pub m: u32,
    pub checks: Vec<BridgeCheck>,
    pub symbols: Vec<SymbolCheck>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.equal) && self.symbols.iter().all(|s| s.equal)
    }
}

/// `u(n)·n^{−j}` for `n ≠ 0`.
fn divide_by_power(u: &ExactSeq, j: u32) -> ExactSeq {
    FinSeq::from_fn(u.lo(), u.hi(), |n| {
        if n == 0 {
            GaussianRational::zero()
        } else {
            let s = gauss_real(pow_int(&rat_int(n), -(j as i32)));
            u.get(n) * s
        }
    })
}

/// `2π·Σ|u|²n^{2p} = ∫|d^p G|²` for `p ≥ 0`, and `∫|G(u/n^{|p|})|²` for `p < 0`.
pub fn moment_bridge(u: &ExactSeq, p: i32) -> Result<BridgeCheck> {
    let sum = form_value(u, FormId::Moment { p: 2 * p })?;
    let fourier_side = if p >= 0 {
        fourier(u).nth_derivative(p as u32).norm_sq_integral()
    } else {
        fourier(&divide_by_power(u, p.unsigned_abs())).norm_sq_integral()
    };
    Ok(BridgeCheck::new(format!("moment n^{}", 2 * p), sum, fourier_side))
}

/// Runs every lattice/Fourier identity up to weight order `k` and Laplacian power `m`.
///
/// Negative-power moments are only checked when `u(0) = 0`.
pub fn parseval_bridge(u: &ExactSeq, k: u32, m: u32) -> Result<BridgeReport> {
    let g = fourier(u);
    let four = rat(4, 1);
    let mut checks = Vec::new();

    let min_p = if u.get(0).is_zero() { -(k as i32) } else { 0 };
    for p in min_p..=k as i32 {
        checks.push(moment_bridge(u, p)?);
    }

    for j in 0..=m {
        let sin_pow = HalfFreqPoly::sin_half_pow(2 * j);
        let sin_pow_odd = HalfFreqPoly::sin_half_pow(2 * j + 1);
        let even_factor = pow_int(&four, 2 * j as i32);
        let odd_factor = pow_int(&four, 2 * j as i32 + 1);
        for w in 0..=k {
            if j > 0 {
                let sum = form_value(u, FormId::LaplacianPower { m: j, k: w })?;
                let f = (&g * &sin_pow).nth_derivative(w).norm_sq_integral();
                checks.push(BridgeCheck::new(format!("laplacian^{j} n^{}", 2 * w), sum, &f * &even_factor));
            }
            let sum = form_value(u, FormId::DLaplacianHalfShift { m: j, k: w })?;
            let f = (&g * &sin_pow_odd).nth_derivative(w).norm_sq_integral();
            checks.push(BridgeCheck::new(
                format!("diff laplacian^{j} (n-1/2)^{}", 2 * w),
                sum,
                &f * &odd_factor,
            ));
        }
    }

    let mut symbols = Vec::new();
    for j in 1..=m.max(1) {
        let lhs = fourier(&u.laplacian_power(j));
        let rhs = (&g * &HalfFreqPoly::sin_half_pow(2 * j)).scale_real(&pow_int(&four, j as i32));
        symbols.push(SymbolCheck { power: j, equal: lhs == rhs });
    }
    Ok(BridgeReport { k, m, checks, symbols })
}

/// `Σ_j Σ_{j′ ≠ j/2} C(2m−k, j)·C(j, j′)·(−½)^j·(2j′−j)^{−k}·v(2j′−j)` for `0 ≤ k ≤ 2m`.
pub fn side_condition(v: &ExactSeq, m: u32, k: u32) -> Result<GaussianRational> {
    if k > 2 * m {
        return Err(Error::ParameterRange(format!("side condition needs 0 <= k <= 2m, got k = {k}, m = {m}")));
    }
    let top = (2 * m - k) as i64;
    let mut total = GaussianRational::zero();
    let mut half_power = Rational::one();
    for j in 0..=top {
        for jp in 0..=j {
            let idx = 2 * jp - j;
            if idx == 0 {
                continue;
            }
            let value = v.get(idx);
            if value.is_zero() {
                continue;
            }
            let c = rat_int(binom(top, j)? * binom(j, jp)?) * &half_power * pow_int(&rat_int(idx), -(k as i32));
            total += value * gauss_real(c);
        }
        half_power *= rat(-1, 2);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{gauss, gauss_int};
    use crate::trigpoly::two_pi;
    use proptest::prelude::*;

    #[test]
    fn fourier_examples() {
        assert_eq!(fourier(&ExactSeq::delta(0)), HalfFreqPoly::one());
        assert_eq!(fourier(&ExactSeq::delta(1)), HalfFreqPoly::exp_int(-1));
        let diff = ExactSeq::delta(1).add(&ExactSeq::delta(0).scale(&gauss_int(-1, 0)));
        // −2i·e^{−ix/2}·sin(x/2)
        let factored = &HalfFreqPoly::monomial(-1, gauss_int(0, -2)) * &HalfFreqPoly::sin_half();
        assert_eq!(fourier(&diff), factored);
    }

    #[test]
    fn fourier_round_trip() {
        let u = ExactSeq::from_fn(-3, 4, |n| gauss_int(n * n - 2, n));
        let back = inverse_fourier(&fourier(&u)).unwrap();
        for n in -3..=4 {
            assert_eq!(back.get(n), u.get(n));
        }
        assert_eq!(inverse_fourier(&HalfFreqPoly::sin_half()), Err(Error::NotIntegerLattice));
    }

    #[test]
    fn delta_one_half_shift_bridge() {
        let r = parseval_bridge(&ExactSeq::delta(1), 1, 0).unwrap();
        let c = r.checks.iter().find(|c| c.name == "diff laplacian^0 (n-1/2)^2").unwrap();
        assert_eq!(c.sequence_side, PiValue::pi_multiple(rat(5, 1)));
        assert!(c.equal);
        let c0 = r.checks.iter().find(|c| c.name == "moment n^0").unwrap();
        assert_eq!(c0.fourier_side, two_pi());
        assert!(r.passed());
    }

    #[test]
    fn side_condition_examples() {
        assert_eq!(side_condition(&ExactSeq::delta(1), 1, 1).unwrap(), gauss(rat(-1, 2), rat(0, 1)));
        let v = ExactSeq::from_fn(0, 9, |n| if n < 4 { gauss_int(0, 0) } else { gauss_int(n, 1) });
        for k in 1..=4 {
            assert!(side_condition(&v, 2, k).unwrap().is_zero());
        }
        assert!(side_condition(&v, 1, 3).is_err());
    }

    // Brute force over all integer points, without the binomial bookkeeping.
    fn side_condition_oracle(v: &ExactSeq, m: u32, k: u32) -> GaussianRational {
        let top = 2 * m - k;
        let mut total = GaussianRational::zero();
        // expand (1 − (e^{ix} + e^{−ix})/2)^{top} one factor at a time
        for mask in 0u32..(3u32.pow(top)) {
            let (mut j, mut jp, mut rest) = (0i64, 0i64, mask);
            for _ in 0..top {
                match rest % 3 {
                    0 => {}
                    1 => j += 1,
                    _ => {
                        j += 1;
                        jp += 1
                    }
                }
                rest /= 3;
            }
            let idx = 2 * jp - j;
            if idx == 0 {
                continue;
            }
            let c = pow_int(&rat(-1, 2), j as i32) * pow_int(&rat_int(idx), -(k as i32));
            total += v.get(idx) * gauss_real(c);
        }
        total
    }

    #[test]
    fn side_condition_matches_oracle_on_odd_sequence() {
        let v = ExactSeq::from_fn(-5, 5, |n| gauss_int(n.signum() * (n * n + 1), 0));
        for m in 1..=2 {
            for k in 0..=2 * m {
                assert_eq!(side_condition(&v, m, k).unwrap(), side_condition_oracle(&v, m, k), "m={m} k={k}");
            }
        }
    }

    fn small_gauss() -> impl Strategy<Value = GaussianRational> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| gauss(rat(a, b), rat(c, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn bridges_hold_on_random_sequences(
            lo in -20i64..=12,
            vals in proptest::collection::vec(small_gauss(), 1..8),
            zero_origin in any::<bool>(),
            k in 0u32..=3,
            m in 0u32..=2,
        ) {
            let mut u = ExactSeq::new(lo, vals);
            if zero_origin {
                u.set(0, GaussianRational::zero());
            }
            let r = parseval_bridge(&u, k, m).unwrap();
            for c in &r.checks {
                prop_assert!(c.equal, "{} failed", c.name);
            }
            prop_assert!(r.passed());
        }

        #[test]
        fn fourier_is_linear(a in proptest::collection::vec(small_gauss(), 1..6), b in proptest::collection::vec(small_gauss(), 1..6), lo in -5i64..5) {
            let u = ExactSeq::new(lo, a);
            let v = ExactSeq::new(lo + 2, b);
            prop_assert_eq!(fourier(&u.add(&v)), &fourier(&u) + &fourier(&v));
        }
    }
}
