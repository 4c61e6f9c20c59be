use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check, InequalityId, Requirement};
use crate::error::Result;
use crate::lattice::{FinSeq, NumericSeq};
use crate::rational::{gauss, rational_from_f64};

/// Every trial whose index is a multiple of this is also checked exactly.
pub const EXACT_SPOT_CHECK_EVERY: u64 = 50;

/// Sampled values are rounded to this many fractional bits so the exact
/// re-check stays cheap.
const VALUE_BITS: i32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: u64,
    pub exact: bool,
    pub margin: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: InequalityId,
    pub trials: u64,
    pub seed: u64,
    pub window: (i64, i64),
    pub min_margin: f64,
    /// Minimum of `margin / max(1, rhs)`.
    pub min_relative_margin: f64,
    pub exact_checks: u64,
    pub failures: Vec<TrialFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn round_to_grid(x: f64) -> f64 {
    let scale = 2f64.powi(VALUE_BITS);
    (x * scale).round() / scale
}

/// Draws an admissible sequence inside `window`: values on a random
/// sub-window, then the required zeros written over it.
fn draw(rng: &mut ChaCha8Rng, req: Requirement, window: (i64, i64)) -> NumericSeq {
    let lo = if req.nonneg_support { window.0.max(0) } else { window.0 };
    let hi = window.1.max(lo).max(req.zero_prefix as i64 + 1);
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(a..=hi);
    let smooth = rng.gen_bool(0.5);
    let decay: f64 = rng.gen_range(-3.0..1.0);
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut u = FinSeq::from_fn(a, b, |n| {
        let (re, im) = if smooth {
            let mag = (n.unsigned_abs() as f64).max(1.0).powf(decay) * (1.0 + 0.1 * rng.gen_range(-1.0..1.0));
            (mag * phase.cos(), mag * phase.sin())
        } else {
            (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        };
        Complex64::new(round_to_grid(re), round_to_grid(im))
    });
    for i in 0..req.zero_prefix as i64 {
        if i >= u.lo() && i <= u.hi() {
            u.set(i, Complex64::new(0.0, 0.0));
        }
    }
    u
}

struct TrialOutcome {
    margin: f64,
    rhs: f64,
    numeric_ok: bool,
    exact: Option<bool>,
}

fn run_trial(id: InequalityId, seed: u64, trial: u64, window: (i64, i64)) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let u = draw(&mut rng, id.requirement(), window);
    let report = check(id, &u)?;
    let margin = report.margin.as_ref().map_or(f64::NAN, |m| m.to_f64());
    let rhs = report.rhs.as_ref().map_or(f64::NAN, |r| r.to_f64());
    let exact = if trial.is_multiple_of(EXACT_SPOT_CHECK_EVERY) {
        let exact_seq = FinSeq::new(
            u.lo(),
            u.values()
                .iter()
                .map(|v| gauss(rational_from_f64(v.re).expect("finite"), rational_from_f64(v.im).expect("finite")))
                .collect(),
        );
        Some(check(id, &exact_seq)?.passed())
    } else {
        None
    };
    Ok(TrialOutcome { margin, rhs, numeric_ok: report.passed(), exact })
}

/// Runs `trials` seeded random admissible sequences through [`check`].
///
/// Trials run in parallel; trial `t` draws from the ChaCha stream `t` of
/// `seed`, so the report does not depend on the thread count.
pub fn random_suite(id: InequalityId, trials: u64, seed: u64, window: (i64, i64)) -> Result<SuiteReport> {
    id.validate()?;
    let outcomes: Vec<Result<TrialOutcome>> =
        (0..trials).into_par_iter().map(|t| run_trial(id, seed, t, window)).collect();
    let mut report = SuiteReport {
        id,
        trials,
        seed,
        window,
        min_margin: f64::INFINITY,
        min_relative_margin: f64::INFINITY,
        exact_checks: 0,
        failures: Vec::new(),
    };
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        let o = outcome?;
        let trial = trial as u64;
        report.min_margin = report.min_margin.min(o.margin);
        report.min_relative_margin = report.min_relative_margin.min(o.margin / o.rhs.max(1.0));
        if !o.numeric_ok {
            report.failures.push(TrialFailure { trial, exact: false, margin: o.margin, rhs: o.rhs });
        }
        if let Some(ok) = o.exact {
            report.exact_checks += 1;
            if !ok {
                report.failures.push(TrialFailure { trial, exact: true, margin: o.margin, rhs: o.rhs });
            }
        }
    }
    Ok(report)
}
