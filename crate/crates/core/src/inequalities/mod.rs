//! Left side, right side and margin of every Hardy-type inequality on a
//! given sequence, a seeded random harness, and the near-extremal family
//! used to probe sharpness.

mod sharpness;
mod suite;

pub use sharpness::{default_beta_grid, default_n_grid, sharpness_family, sharpness_sweep, SharpnessRow};
pub use suite::{random_suite, SuiteReport, TrialFailure, EXACT_SPOT_CHECK_EVERY};

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{gamma, higher_order_const, product_const, Parity};
use crate::error::{Error, Result};
use crate::lattice::{form_value, AnySeq, FinSeq, FormId, FormReal, FormValue, SeqScalar};
use crate::rational::{pow_int, rat, rat_int, Rational};

/// Relative slack for margins computed in floating point.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

/// One inequality with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InequalityId {
    /// `Σ|Du|² ≥ ¼Σ|u|²/n²` on `ℕ₀`.
    ClassicalHardy,
    /// Half-shift weight with all lower moments and the `n^{−2}` remainder, on `ℤ`.
    HalfShiftImproved { k: u32 },
    /// Half-shift weight, leading term only, on `ℤ`.
    HalfShift { k: u32 },
    /// Power weight with all lower moments and the remainder, on `ℕ₀`.
    PowerImproved { k: u32 },
    /// Power weight, leading term only, on `ℕ₀`.
    Power { k: u32 },
    /// `Σ|Δᵐu|² ≥ c·Σ|u|²/n^{4m}` with `u(0..2m) = 0`.
    HigherOrderEven { m: u32 },
    /// `Σ|DΔᵐu|² ≥ c·Σ|u|²/n^{4m+2}` with `u(0..=2m) = 0`.
    HigherOrderOdd { m: u32 },
    /// `Σ|Δu|² ≥ ½Σ|u|²/n⁴` with `u(0) = u(1) = 0`.
    Rellich,
    /// `Σ|Δᵐu|²n^{2k} ≥ c·Σ|u|²n^{2k−4m}` on `ℤ`, `k ≥ 2m`.
    WeightedHigherOrderEven { m: u32, k: u32 },
    /// `Σ|DΔᵐu|²(n−½)^{2k} ≥ c·Σ|u|²n^{2k−4m−2}` on `ℤ`, `k ≥ 2m+1`.
    WeightedHigherOrderOdd { m: u32, k: u32 },
}

pub const INEQUALITY_NAMES: [&str; 10] = [
    "hardy_11",
    "thm21",
    "cor22",
    "cor23",
    "cor24",
    "thm25_even",
    "thm25_odd",
    "cor26",
    "thm28_even",
    "thm28_odd",
];

impl InequalityId {
    /// Builds an id from its command-line name, checking parameter ranges.
    pub fn parse(name: &str, k: Option<u32>, m: Option<u32>) -> Result<InequalityId> {
        let need = |v: Option<u32>, what: &str| {
            v.ok_or_else(|| Error::ParameterRange(format!("{name} needs parameter {what}")))
        };
        let id = match name {
            "hardy_11" => InequalityId::ClassicalHardy,
            "thm21" => InequalityId::HalfShiftImproved { k: need(k, "k")? },
            "cor22" => InequalityId::HalfShift { k: need(k, "k")? },
            "cor23" => InequalityId::PowerImproved { k: need(k, "k")? },
            "cor24" => InequalityId::Power { k: need(k, "k")? },
            "thm25_even" => InequalityId::HigherOrderEven { m: need(m, "m")? },
            "thm25_odd" => InequalityId::HigherOrderOdd { m: need(m, "m")? },
            "cor26" => InequalityId::Rellich,
            "thm28_even" => InequalityId::WeightedHigherOrderEven { m: need(m, "m")?, k: need(k, "k")? },
            "thm28_odd" => InequalityId::WeightedHigherOrderOdd { m: need(m, "m")?, k: need(k, "k")? },
            other => return Err(Error::UnknownInequality(other.to_string())),
        };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ParameterRange(msg));
        match *self {
            InequalityId::HalfShiftImproved { k }
            | InequalityId::HalfShift { k }
            | InequalityId::PowerImproved { k }
            | InequalityId::Power { k }
                if k == 0 =>
            {
                bad(format!("{}: k must be at least 1", self.name()))
            }
            InequalityId::HigherOrderEven { m } | InequalityId::HigherOrderOdd { m } if m == 0 => {
                bad(format!("{}: m must be at least 1", self.name()))
            }
            InequalityId::WeightedHigherOrderEven { m, k } if m == 0 || k < 2 * m => {
                bad(format!("thm28_even needs m >= 1 and k >= 2m, got m = {m}, k = {k}"))
            }
            InequalityId::WeightedHigherOrderOdd { m, k } if m == 0 || k < 2 * m + 1 => {
                bad(format!("thm28_odd needs m >= 1 and k >= 2m+1, got m = {m}, k = {k}"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InequalityId::ClassicalHardy => "hardy_11",
            InequalityId::HalfShiftImproved { .. } => "thm21",
            InequalityId::HalfShift { .. } => "cor22",
            InequalityId::PowerImproved { .. } => "cor23",
            InequalityId::Power { .. } => "cor24",
            InequalityId::HigherOrderEven { .. } => "thm25_even",
            InequalityId::HigherOrderOdd { .. } => "thm25_odd",
            InequalityId::Rellich => "cor26",
            InequalityId::WeightedHigherOrderEven { .. } => "thm28_even",
            InequalityId::WeightedHigherOrderOdd { .. } => "thm28_odd",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            InequalityId::HalfShiftImproved { k }
            | InequalityId::HalfShift { k }
            | InequalityId::PowerImproved { k }
            | InequalityId::Power { k }
            | InequalityId::WeightedHigherOrderEven { k, .. }
            | InequalityId::WeightedHigherOrderOdd { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn m(&self) -> Option<u32> {
        match *self {
            InequalityId::HigherOrderEven { m }
            | InequalityId::HigherOrderOdd { m }
            | InequalityId::WeightedHigherOrderEven { m, .. }
            | InequalityId::WeightedHigherOrderOdd { m, .. } => Some(m),
            _ => None,
        }
    }

    /// Zero and support conditions on admissible sequences.
    pub fn requirement(&self) -> Requirement {
        let on_half_line = |zeros| Requirement { nonneg_support: true, zero_prefix: zeros };
        let on_line = Requirement { nonneg_support: false, zero_prefix: 0 };
        match *self {
            InequalityId::ClassicalHardy | InequalityId::PowerImproved { .. } | InequalityId::Power { .. } => {
                on_half_line(1)
            }
            InequalityId::HigherOrderEven { m } => on_half_line(2 * m),
            InequalityId::HigherOrderOdd { m } => on_half_line(2 * m + 1),
            InequalityId::Rellich => on_half_line(2),
            InequalityId::HalfShiftImproved { .. }
            | InequalityId::HalfShift { .. }
            | InequalityId::WeightedHigherOrderEven { .. }
            | InequalityId::WeightedHigherOrderOdd { .. } => Requirement { zero_prefix: 1, ..on_line },
        }
    }

    /// Left-hand form and right-hand terms with exact coefficients.
    pub fn statement(&self) -> Result<Statement> {
        self.validate()?;
        let quarter_odd_square = |k: u32| rat_int((2 * k as i64 - 1).pow(2)) / rat_int(4);
        let improved = |k: u32| -> Result<Vec<RhsTerm>> {
            let mut terms = Vec::new();
            for i in 1..=k {
                let p = 2 * (k - i) as i32;
                terms.push(RhsTerm::new(format!("gamma_{i} * sum |u|^2 n^{p}"), gamma(k, i)?, p));
            }
            let remainder = pow_int(&rat(2, 1), -(2 * k as i32 + 4));
            terms.push(RhsTerm::new("remainder * sum |u|^2 n^-2".into(), remainder, -2));
            Ok(terms)
        };
        let leading = |k: u32| {
            let p = 2 * k as i32 - 2;
            vec![RhsTerm::new(format!("sum |u|^2 n^{p}"), quarter_odd_square(k), p)]
        };
        let st = match *self {
            InequalityId::ClassicalHardy => Statement {
                lhs: FormId::DiffPower { k: 0 },
                rhs: vec![RhsTerm::new("sum |u|^2 n^-2".into(), rat(1, 4), -2)],
            },
            InequalityId::HalfShiftImproved { k } => Statement { lhs: FormId::DiffHalfShift { k }, rhs: improved(k)? },
            InequalityId::HalfShift { k } => Statement { lhs: FormId::DiffHalfShift { k }, rhs: leading(k) },
            InequalityId::PowerImproved { k } => Statement { lhs: FormId::DiffPower { k }, rhs: improved(k)? },
            InequalityId::Power { k } => Statement { lhs: FormId::DiffPower { k }, rhs: leading(k) },
            InequalityId::HigherOrderEven { m } => Statement {
                lhs: FormId::Laplacian { m },
                rhs: vec![RhsTerm::new(
                    format!("sum |u|^2 n^-{}", 4 * m),
                    higher_order_const(m, Parity::Even)?,
                    -(4 * m as i32),
                )],
            },
            InequalityId::HigherOrderOdd { m } => Statement {
                lhs: FormId::DLaplacian { m },
                rhs: vec![RhsTerm::new(
                    format!("sum |u|^2 n^-{}", 4 * m + 2),
                    higher_order_const(m, Parity::Odd)?,
                    -(4 * m as i32 + 2),
                )],
            },
            InequalityId::Rellich => Statement {
                lhs: FormId::Laplacian { m: 1 },
                rhs: vec![RhsTerm::new("sum |u|^2 n^-4".into(), rat(1, 2), -4)],
            },
            InequalityId::WeightedHigherOrderEven { m, k } => {
                let p = 2 * k as i32 - 4 * m as i32;
                Statement {
                    lhs: FormId::LaplacianPower { m, k },
                    rhs: vec![RhsTerm::new(format!("sum |u|^2 n^{p}"), product_const(m, k, Parity::Even)?, p)],
                }
            }
            InequalityId::WeightedHigherOrderOdd { m, k } => {
                let p = 2 * k as i32 - 4 * m as i32 - 2;
                Statement {
                    lhs: FormId::DLaplacianHalfShift { m, k },
                    rhs: vec![RhsTerm::new(format!("sum |u|^2 n^{p}"), product_const(m, k, Parity::Odd)?, p)],
                }
            }
        };
        Ok(st)
    }

    /// The constant multiplying the leading moment.
    pub fn leading_constant(&self) -> Result<Rational> {
        Ok(self.statement()?.rhs[0].coefficient.clone())
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if let Some(m) = self.m() {
            write!(f, " m={m}")?;
        }
        if let Some(k) = self.k() {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

impl Serialize for InequalityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            name: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            k: Option<u32>,
            #[serde(skip_serializing_if = "Option::is_none")]
            m: Option<u32>,
        }
        Repr { name: self.name(), k: self.k(), m: self.m() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for InequalityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            name: String,
            k: Option<u32>,
            m: Option<u32>,
        }
        let r = Repr::deserialize(d)?;
        InequalityId::parse(&r.name, r.k, r.m).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    /// Sequence must vanish on negative integers.
    pub nonneg_support: bool,
    /// `u(i) = 0` for `0 ≤ i < zero_prefix`.
    pub zero_prefix: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhsTerm {
    pub label: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub coefficient: Rational,
    /// Exponent `p` of the moment `Σ|u|²n^p`.
    pub power: i32,
}

impl RhsTerm {
    fn new(label: String, coefficient: Rational, power: i32) -> Self {
        RhsTerm { label, coefficient, power }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statement {
    pub lhs: FormId,
    pub rhs: Vec<RhsTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityCheck {
    pub required: Requirement,
    pub nonneg_support: bool,
    /// Number of leading zeros `u(0), u(1), …`, capped at the requirement.
    pub zero_prefix: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedTerm {
    pub label: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub coefficient: Rational,
    pub moment: FormValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: InequalityId,
    pub exact: bool,
    pub admissibility: AdmissibilityCheck,
    /// `None` when the sequence is inadmissible.
    pub lhs: Option<FormValue>,
    pub rhs_terms: Vec<EvaluatedTerm>,
    pub rhs: Option<FormValue>,
    pub margin: Option<FormValue>,
    /// Margin nonnegative (exact) or above `−1e−9·max(1, rhs)` (numeric).
    pub holds: Option<bool>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.holds == Some(true)
    }
}

fn admissibility_of<T: SeqScalar>(req: Requirement, u: &FinSeq<T>) -> AdmissibilityCheck {
    let a = u.admissibility();
    let support_ok = !req.nonneg_support || a.nonneg_support;
    AdmissibilityCheck {
        required: req,
        nonneg_support: a.nonneg_support,
        zero_prefix: a.zero_prefix.min(req.zero_prefix),
        pass: support_ok && a.has_zero_prefix(req.zero_prefix),
    }
}

/// Evaluates both sides of `id` on `u`.
pub fn check<T: SeqScalar>(id: InequalityId, u: &FinSeq<T>) -> Result<CheckReport> {
    let st = id.statement()?;
    let admissibility = admissibility_of(id.requirement(), u);
    if !admissibility.pass {
        return Ok(CheckReport {
            id,
            exact: T::EXACT,
            admissibility,
            lhs: None,
            rhs_terms: Vec::new(),
            rhs: None,
            margin: None,
            holds: None,
        });
    }
    let lhs = form_value(u, st.lhs)?;
    let mut rhs = T::Real::zero();
    let mut rhs_terms = Vec::with_capacity(st.rhs.len());
    for term in st.rhs {
        let moment = form_value(u, FormId::Moment { p: term.power })?;
        rhs = rhs + T::Real::from_rational(&term.coefficient) * moment.clone();
        rhs_terms.push(EvaluatedTerm { label: term.label, coefficient: term.coefficient, moment: moment.into_form_value() });
    }
    let margin = lhs.clone() - rhs.clone();
    let holds = if T::EXACT {
        margin >= T::Real::zero()
    } else {
        margin.to_f64() >= -NUMERIC_TOLERANCE * rhs.to_f64().max(1.0)
    };
    Ok(CheckReport {
        id,
        exact: T::EXACT,
        admissibility,
        lhs: Some(lhs.into_form_value()),
        rhs_terms,
        rhs: Some(rhs.into_form_value()),
        margin: Some(margin.into_form_value()),
        holds: Some(holds),
    })
}

pub fn check_any(id: InequalityId, u: &AnySeq) -> Result<CheckReport> {
    match u {
        AnySeq::Exact(s) => check(id, s),
        AnySeq::Numeric(s) => check(id, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ExactSeq;
    use crate::rational::gauss_int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exact_margin(r: &CheckReport) -> Rational {
        r.margin.as_ref().and_then(|m| m.as_exact().cloned()).expect("exact margin")
    }

    #[test]
    fn hardy_on_delta_one() {
        let r = check(InequalityId::ClassicalHardy, &ExactSeq::delta(1)).unwrap();
        assert_eq!(r.lhs, Some(FormValue::Exact(rat(2, 1))));
        assert_eq!(exact_margin(&r), rat(7, 4));
        assert!(r.passed());
    }

    #[test]
    fn rellich_on_delta_two() {
        let r = check(InequalityId::Rellich, &ExactSeq::delta(2)).unwrap();
        assert_eq!(r.lhs, Some(FormValue::Exact(rat(6, 1))));
        assert_eq!(exact_margin(&r), rat(191, 32));
    }

    fn all_ids() -> Vec<InequalityId> {
        let mut ids = vec![InequalityId::ClassicalHardy, InequalityId::Rellich];
        for k in 1..=3 {
            ids.extend([
                InequalityId::HalfShiftImproved { k },
                InequalityId::HalfShift { k },
                InequalityId::PowerImproved { k },
                InequalityId::Power { k },
            ]);
        }
        for m in 1..=2 {
            ids.extend([InequalityId::HigherOrderEven { m }, InequalityId::HigherOrderOdd { m }]);
        }
        ids.extend([
            InequalityId::WeightedHigherOrderEven { m: 1, k: 2 },
            InequalityId::WeightedHigherOrderEven { m: 2, k: 5 },
            InequalityId::WeightedHigherOrderOdd { m: 1, k: 3 },
        ]);
        ids
    }

    #[test]
    fn zero_sequence_has_zero_margin() {
        for id in all_ids() {
            let r = check(id, &ExactSeq::zero()).unwrap();
            assert_eq!(exact_margin(&r), rat(0, 1), "{id}");
        }
    }

    #[test]
    fn inadmissible_sequences_are_reported() {
        let r = check(InequalityId::Rellich, &ExactSeq::delta(1)).unwrap();
        assert!(!r.admissibility.pass);
        assert_eq!(r.margin, None);
        let r = check(InequalityId::ClassicalHardy, &ExactSeq::delta(-1)).unwrap();
        assert!(!r.admissibility.pass);
        let r = check(InequalityId::HalfShift { k: 1 }, &ExactSeq::delta(-1)).unwrap();
        assert!(r.admissibility.pass);
    }

    #[test]
    fn parse_validates_ranges() {
        assert_eq!(InequalityId::parse("cor22", Some(2), None).unwrap(), InequalityId::HalfShift { k: 2 });
        assert!(matches!(InequalityId::parse("thm28_even", Some(3), Some(2)), Err(Error::ParameterRange(_))));
        assert!(InequalityId::parse("thm28_odd", Some(3), Some(1)).is_ok());
        assert!(matches!(InequalityId::parse("thm21", None, None), Err(Error::ParameterRange(_))));
        assert!(matches!(InequalityId::parse("thm99", None, None), Err(Error::UnknownInequality(_))));
        for name in INEQUALITY_NAMES {
            let id = InequalityId::parse(name, Some(5), Some(1)).unwrap();
            assert_eq!(id.name(), name);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(serde_json::from_str::<InequalityId>(&json).unwrap(), id);
        }
    }

    fn random_admissible(rng: &mut ChaCha8Rng, req: Requirement) -> ExactSeq {
        let lo = if req.nonneg_support { 0 } else { -8 };
        let mut u = ExactSeq::from_fn(lo, 12, |_| gauss_int(rng.gen_range(-9..=9), rng.gen_range(-9..=9)));
        for i in 0..req.zero_prefix as i64 {
            u.set(i, gauss_int(0, 0));
        }
        u
    }

    #[test]
    fn exact_margins_nonnegative_on_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for id in all_ids() {
            for _ in 0..20 {
                let u = random_admissible(&mut rng, id.requirement());
                let r = check(id, &u).unwrap();
                assert!(r.passed(), "{id}: margin {:?}", r.margin);
            }
        }
    }

    #[test]
    fn power_weight_margin_dominates_half_shift_margin() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 1..=4 {
            for _ in 0..10 {
                let u = random_admissible(&mut rng, InequalityId::Power { k }.requirement());
                let power = exact_margin(&check(InequalityId::PowerImproved { k }, &u).unwrap());
                let shift = exact_margin(&check(InequalityId::HalfShiftImproved { k }, &u).unwrap());
                assert!(power >= shift, "k={k}");
            }
        }
    }

    #[test]
    fn dropping_remainders_increases_margin() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 1..=4 {
            for _ in 0..10 {
                let u = random_admissible(&mut rng, InequalityId::HalfShift { k }.requirement());
                let improved = exact_margin(&check(InequalityId::HalfShiftImproved { k }, &u).unwrap());
                let plain = exact_margin(&check(InequalityId::HalfShift { k }, &u).unwrap());
                assert!(improved <= plain, "k={k}");
            }
        }
    }

    #[test]
    fn leading_gamma_is_the_sharp_constant() {
        for k in 1..=6 {
            let st = InequalityId::HalfShiftImproved { k }.statement().unwrap();
            assert_eq!(st.rhs[0].coefficient, rat_int((2 * k as i64 - 1).pow(2)) / rat_int(4));
            assert_eq!(st.rhs.len(), k as usize + 1);
        }
    }
}
