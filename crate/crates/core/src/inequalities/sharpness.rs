use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::InequalityId;
use crate::error::{Error, Result};
use crate::lattice::{FinSeq, NumericSeq};
use num_complex::Complex64;

/// `n^β` on `[1, N]` followed by the linear ramp `−N^{β−1}n + 2N^β` on `[N, 2N]`.
pub fn sharpness_family(beta: f64, n_max: u64) -> Result<NumericSeq> {
    if n_max == 0 {
        return Err(Error::ParameterRange("N must be at least 1".into()));
    }
    let n_max = n_max as i64;
    Ok(FinSeq::from_fn(1, 2 * n_max, |n| Complex64::new(family_value(beta, n_max, n), 0.0)))
}

fn family_value(beta: f64, n_max: i64, n: i64) -> f64 {
    let nf = n_max as f64;
    if n < 1 || n > 2 * n_max {
        0.0
    } else if n <= n_max {
        (n as f64).powf(beta)
    } else {
        -nf.powf(beta - 1.0) * n as f64 + 2.0 * nf.powf(beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub beta: f64,
    pub n: u64,
    pub lhs: f64,
    /// `Σ|u|²n^{2k−2}`, without the constant.
    pub rhs: f64,
    pub quotient: f64,
    /// `quotient − (2k−1)²/4`.
    pub gap: f64,
}

/// `β_j = (1−2k)/2 − 2^{−j}` for `j = 1..=steps`.
pub fn default_beta_grid(k: u32, steps: u32) -> Vec<f64> {
    let edge = (1.0 - 2.0 * k as f64) / 2.0;
    (1..=steps).map(|j| edge - 2f64.powi(-(j as i32))).collect()
}

/// `10², 10³, …, 10^{max_exp}`.
pub fn default_n_grid(max_exp: u32) -> Vec<u64> {
    (2..=max_exp).map(|e| 10u64.pow(e)).collect()
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Both sides of the half-shift or power inequality on the family, summed
/// term by term without materializing the sequence.
fn family_sides(half_shift: bool, k: u32, beta: f64, n_max: u64) -> (f64, f64) {
    let n_max = n_max as i64;
    let mut lhs = Accumulator::default();
    let mut rhs = Accumulator::default();
    let mut prev = 0.0;
    for n in 1..=2 * n_max + 1 {
        let u = family_value(beta, n_max, n);
        let d = u - prev;
        let base = if half_shift { n as f64 - 0.5 } else { n as f64 };
        lhs.add(d * d * base.powi(2 * k as i32));
        rhs.add(u * u * (n as f64).powi(2 * k as i32 - 2));
        prev = u;
    }
    (lhs.value(), rhs.value())
}

/// Quotients `LHS / Σ|u|²n^{2k−2}` of the family over a `β × N` grid.
///
/// Only `cor22` and `cor24` are accepted, and every `β` must lie strictly
/// below `(1−2k)/2`.
pub fn sharpness_sweep(id: InequalityId, betas: &[f64], ns: &[u64]) -> Result<Vec<SharpnessRow>> {
    let (half_shift, k) = match id {
        InequalityId::HalfShift { k } => (true, k),
        InequalityId::Power { k } => (false, k),
        other => return Err(Error::ParameterRange(format!("sharpness sweep supports cor22 and cor24, not {other}"))),
    };
    id.validate()?;
    let edge = (1.0 - 2.0 * k as f64) / 2.0;
    if let Some(b) = betas.iter().find(|b| !(**b < edge)) {
        return Err(Error::ParameterRange(format!("beta = {b} must be below (1-2k)/2 = {edge}")));
    }
    if ns.contains(&0) {
        return Err(Error::ParameterRange("N must be at least 1".into()));
    }
    let target = ((2 * k - 1) as f64).powi(2) / 4.0;
    let cells: Vec<(f64, u64)> = betas.iter().flat_map(|&b| ns.iter().map(move |&n| (b, n))).collect();
    Ok(cells
        .into_par_iter()
        .map(|(beta, n)| {
            let (lhs, rhs) = family_sides(half_shift, k, beta, n);
            let quotient = lhs / rhs;
            SharpnessRow { beta, n, lhs, rhs, quotient, gap: quotient - target }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{form_value, FormId};

    #[test]
    fn family_examples() {
        let u = sharpness_family(-0.3, 1).unwrap();
        assert_eq!(u.get(1).re, 1.0);
        assert_eq!(u.get(2).re, 0.0);
        let v = sharpness_family(1.0, 3).unwrap();
        let expected = [1.0, 2.0, 3.0, 2.0, 1.0, 0.0];
        for (n, e) in (1..=6).zip(expected) {
            assert!((v.get(n).re - e).abs() < 1e-12, "n = {n}");
        }
        assert!(sharpness_family(0.5, 0).is_err());
    }

    #[test]
    fn streaming_sums_match_forms() {
        for (half_shift, k) in [(true, 1), (false, 2), (true, 3)] {
            let beta = (1.0 - 2.0 * k as f64) / 2.0 - 0.1;
            let (lhs, rhs) = family_sides(half_shift, k, beta, 200);
            let u = sharpness_family(beta, 200).unwrap();
            let lhs_form = if half_shift { FormId::DiffHalfShift { k } } else { FormId::DiffPower { k } };
            let l: f64 = form_value(&u, lhs_form).unwrap();
            let r: f64 = form_value(&u, FormId::Moment { p: 2 * k as i32 - 2 }).unwrap();
            assert!(((lhs - l) / l).abs() < 1e-12);
            assert!(((rhs - r) / r).abs() < 1e-12);
        }
    }

    #[test]
    fn quotients_bounded_below_and_monotone_in_n() {
        for id in [InequalityId::HalfShift { k: 1 }, InequalityId::Power { k: 1 }, InequalityId::Power { k: 2 }] {
            let k = id.k().unwrap();
            let target = ((2 * k - 1) as f64).powi(2) / 4.0;
            let betas = default_beta_grid(k, 4);
            let ns = default_n_grid(4);
            let rows = sharpness_sweep(id, &betas, &ns).unwrap();
            for r in &rows {
                assert!(r.quotient >= target - 1e-9, "{id}: {r:?}");
            }
            for beta in betas {
                let q: Vec<f64> = rows.iter().filter(|r| r.beta == beta).map(|r| r.quotient).collect();
                assert!(q.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{id} beta {beta}: {q:?}");
            }
        }
    }

    #[test]
    fn computed_quotients_are_frozen() {
        // Direct summation at beta = -0.49, N = 10^4, just above the edge.
        let (l, r) = family_sides(false, 1, -0.49, 10_000);
        assert!((l / r - 0.589).abs() < 5e-3, "{}", l / r);
        let (l, r) = family_sides(true, 1, -0.49, 10_000);
        assert!((l / r - 0.497).abs() < 5e-3, "{}", l / r);
    }

    #[test]
    fn refuses_beta_at_or_above_edge() {
        assert!(sharpness_sweep(InequalityId::Power { k: 1 }, &[-0.5], &[100]).is_err());
        assert!(sharpness_sweep(InequalityId::Rellich, &[-2.0], &[100]).is_err());
    }
}
