use std::fs;
use std::path::Path;

use hardy_core::combinatorics::{
    constant_table, constants_positive, printed_gamma_discrepancies, verify_even_binomial_sums,
    verify_xi_closed_form, CSV_HEADER,
};
use hardy_core::inequalities::{
    check_any, default_beta_grid, random_suite, sharpness_sweep, InequalityId, NUMERIC_TOLERANCE,
};
use hardy_core::lattice::{parseval_bridge, AnySeq, ExactSeq};
use hardy_core::rational::{format_rational, gauss, rat, GaussianRational};
use hardy_core::spectral::{extrapolate, sweep};
use hardy_core::trigpoly::{
    project_weighted_zero_mean, project_zero_mean, random_poly, verify_double_sine_bound, verify_mode_integrals,
    verify_sine_product_expansion, verify_weighted_sine_bound, verify_zero_mean_expansion_bound,
    verify_zero_mean_sine_bound, HalfFreqPoly, MarginReport, PolyDistribution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    ConstantsArgs, IdentityArgs, LemmaArgs, LemmaKind, ParsevalArgs, SharpnessArgs, SpectrumArgs, VerifyArgs,
};
use crate::CliError;

/// Rows for the report plus pass/fail counts.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
    pub passed: u64,
    pub failed: u64,
    pub estimate: Option<Value>,
}

impl Outcome {
    fn new(header: &[&str]) -> Self {
        Outcome { csv_header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    fn tally(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn constants(a: &ConstantsArgs) -> Result<Outcome, CliError> {
    let table = constant_table(a.k)?;
    let mut out = Outcome::new(&CSV_HEADER);
    out.csv_rows = table.csv_records();
    let positive = constants_positive(&table);
    for row in &table.rows {
        out.results.push(serde_json::to_value(row).expect("row serializes"));
    }
    out.tally(positive);
    let errata: Vec<_> = printed_gamma_discrepancies(a.k)?.into_iter().filter(|e| e.k == a.k).collect();
    out.results.push(json!({
        "check": "constants_positive",
        "pass": positive,
        "printed_gamma_inconsistent_at": errata.iter().filter(|e| !e.consistent).map(|e| e.i).collect::<Vec<_>>(),
    }));
    Ok(out)
}

pub fn identity(a: &IdentityArgs) -> Result<Outcome, CliError> {
    if a.k_max == 0 {
        return Err(CliError::Config("--k-max must be at least 1".into()));
    }
    let mut out = Outcome::new(&["k", "i", "lhs", "rhs", "pass"]);
    let reports: Vec<_> = (1..=a.k_max)
        .into_par_iter()
        .map(|k| -> Result<_, CliError> {
            let xi = verify_xi_closed_form(k)?;
            let sums = (-a.n_max..=a.n_max)
                .map(|n| verify_even_binomial_sums(k, n))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((xi, sums))
        })
        .collect::<Result<_, _>>()?;
    for (xi, sums) in reports {
        for c in &xi.cases {
            out.csv_rows.push(vec![
                xi.k.to_string(),
                c.i.to_string(),
                format_rational(&c.lhs),
                format_rational(&c.rhs),
                c.pass.to_string(),
            ]);
        }
        let failed_sums: Vec<i64> = sums.iter().filter(|s| !s.passed()).map(|s| s.n).collect();
        let ok = xi.passed() && failed_sums.is_empty();
        out.tally(ok);
        out.results.push(json!({
            "k": xi.k,
            "pass": ok,
            "xi_closed_form": xi.passed(),
            "failed_xi_cases": xi.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>(),
            "binomial_sums_checked": sums.len(),
            "failed_binomial_n": failed_sums,
        }));
    }
    Ok(out)
}

fn margin_row(trial: u64, name: &str, k: u32, r: &MarginReport) -> Vec<String> {
    vec![
        trial.to_string(),
        name.to_string(),
        k.to_string(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.margin.to_string(),
        r.sign.clone(),
        r.holds.to_string(),
    ]
}

pub fn lemma(a: &LemmaArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(&["trial", "lemma", "k", "lhs", "rhs", "margin", "sign", "holds"]);
    let name = serde_json::to_value(a.lemma).expect("kind serializes").as_str().unwrap_or_default().to_string();
    if a.lemma == LemmaKind::ModeIntegrals {
        let mut cases = Vec::new();
        for n in -10..=10 {
            for m in 0..=a.k {
                for k in 1..=a.k.max(1) {
                    cases.push((n, m, k));
                }
            }
        }
        for (n, m, k) in cases {
            let r = verify_mode_integrals(n, m, k)?;
            let ok = r.passed();
            out.tally(ok);
            out.csv_rows.push(vec![
                n.to_string(),
                name.clone(),
                format!("m={m};k={k}"),
                r.energy.lhs.to_string(),
                r.energy.rhs.to_string(),
                String::new(),
                String::new(),
                ok.to_string(),
            ]);
            out.results.push(serde_json::to_value(&r).expect("report serializes"));
        }
        return Ok(out);
    }
    let min_k = if matches!(a.lemma, LemmaKind::WeightedZeroMean | LemmaKind::DoubleSine) { 2 } else { 1 };
    let k_values: Vec<u32> = if a.lemma == LemmaKind::ZeroMean { vec![1] } else { (min_k..=a.k).collect() };
    if k_values.is_empty() {
        return Err(CliError::Config(format!("--k must be at least {min_k} for {name}")));
    }
    let given = match &a.input {
        Some(p) => Some(
            serde_json::from_str::<HalfFreqPoly>(&read_input(p)?)
                .map_err(|e| CliError::Config(format!("bad polynomial JSON: {e}")))?,
        ),
        None => None,
    };
    let trials = if given.is_some() { 1 } else { a.trials };
    let dist = PolyDistribution::default();
    let rows: Vec<Vec<(u32, Value, Vec<String>, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_, CliError> {
            let base = match &given {
                Some(p) => p.clone(),
                None => random_poly(&mut rng_for(a.seed, t), &dist),
            };
            let mut rows = Vec::new();
            for &k in &k_values {
                let (value, row, ok) = match a.lemma {
                    LemmaKind::SineProduct => {
                        let r = verify_sine_product_expansion(&base, k)?;
                        let row = vec![
                            t.to_string(),
                            name.clone(),
                            k.to_string(),
                            r.lhs.to_string(),
                            r.rhs.to_string(),
                            String::new(),
                            String::new(),
                            r.equal.to_string(),
                        ];
                        (serde_json::to_value(&r).expect("serializes"), row, r.equal)
                    }
                    kind => {
                        let u = match (kind, given.is_some()) {
                            (_, true) => base.clone(),
                            (LemmaKind::WeightedZeroMean, false) => project_weighted_zero_mean(&base, k),
                            (_, false) => project_zero_mean(&base),
                        };
                        let r = match kind {
                            LemmaKind::ZeroMean => verify_zero_mean_sine_bound(&u)?,
                            LemmaKind::ZeroMeanExpansion => verify_zero_mean_expansion_bound(&u, k)?,
                            LemmaKind::WeightedZeroMean => verify_weighted_sine_bound(&u, k)?,
                            _ => verify_double_sine_bound(&u, k)?,
                        };
                        let row = margin_row(t, &name, k, &r);
                        (serde_json::to_value(&r).expect("serializes"), row, r.holds)
                    }
                };
                rows.push((k, value, row, ok));
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;
    for (t, trial_rows) in rows.into_iter().enumerate() {
        for (k, mut value, row, ok) in trial_rows {
            out.tally(ok);
            if let Value::Object(map) = &mut value {
                map.insert("trial".into(), json!(t));
                map.insert("k".into(), json!(k));
            }
            out.results.push(value);
            out.csv_rows.push(row);
        }
    }
    Ok(out)
}

fn random_sequence(rng: &mut ChaCha8Rng) -> ExactSeq {
    let lo = rng.gen_range(-20..=20);
    let hi = rng.gen_range(lo..=20.min(lo + 12));
    let mut u = ExactSeq::from_fn(lo, hi, |_| -> GaussianRational {
        gauss(rat(rng.gen_range(-20..=20), rng.gen_range(1..=20)), rat(rng.gen_range(-20..=20), rng.gen_range(1..=20)))
    });
    if rng.gen_bool(0.5) && lo <= 0 && hi >= 0 {
        u.set(0, GaussianRational::new(rat(0, 1), rat(0, 1)));
    }
    u
}

pub fn parseval(a: &ParsevalArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(&["trial", "check", "sequence_side", "fourier_side", "equal"]);
    let given = match &a.input {
        Some(p) => Some(AnySeq::from_json(&read_input(p)?)?.exact()?.clone()),
        None => None,
    };
    let trials = if given.is_some() { 1 } else { a.trials };
    let reports: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let u = match &given {
                Some(u) => u.clone(),
                None => random_sequence(&mut rng_for(a.seed, t)),
            };
            parseval_bridge(&u, a.k, a.m)
        })
        .collect::<Result<_, _>>()?;
    for (t, r) in reports.into_iter().enumerate() {
        out.tally(r.passed());
        for c in &r.checks {
            out.csv_rows.push(vec![
                t.to_string(),
                c.name.clone(),
                c.sequence_side.to_string(),
                c.fourier_side.to_string(),
                c.equal.to_string(),
            ]);
        }
        for s in &r.symbols {
            out.csv_rows.push(vec![
                t.to_string(),
                format!("symbol laplacian^{}", s.power),
                String::new(),
                String::new(),
                s.equal.to_string(),
            ]);
        }
        let mut v = serde_json::to_value(&r).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.insert("trial".into(), json!(t));
            map.insert("pass".into(), json!(r.passed()));
        }
        out.results.push(v);
    }
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let id = InequalityId::parse(&a.id, a.k, a.m)?;
    if let Some(path) = &a.input {
        let u = AnySeq::from_json(&read_input(path)?)?;
        let r = check_any(id, &u)?;
        let mut out = Outcome::new(&["id", "admissible", "lhs", "rhs", "margin", "holds"]);
        let show = |v: &Option<hardy_core::lattice::FormValue>| {
            v.as_ref().map_or(String::new(), |x| match x.as_exact() {
                Some(q) => format_rational(q),
                None => x.to_f64().to_string(),
            })
        };
        out.csv_rows.push(vec![
            id.to_string(),
            r.admissibility.pass.to_string(),
            show(&r.lhs),
            show(&r.rhs),
            show(&r.margin),
            r.passed().to_string(),
        ]);
        out.tally(r.passed());
        out.results.push(serde_json::to_value(&r).expect("report serializes"));
        return Ok(out);
    }
    if a.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    if a.window_hi < a.window_lo {
        return Err(CliError::Config("--window-hi must not be below --window-lo".into()));
    }
    let r = random_suite(id, a.trials, a.seed, (a.window_lo, a.window_hi))?;
    let mut out = Outcome::new(&[
        "id",
        "trials",
        "seed",
        "min_margin",
        "min_relative_margin",
        "exact_checks",
        "failures",
    ]);
    out.csv_rows.push(vec![
        id.to_string(),
        r.trials.to_string(),
        r.seed.to_string(),
        r.min_margin.to_string(),
        r.min_relative_margin.to_string(),
        r.exact_checks.to_string(),
        r.failures.len().to_string(),
    ]);
    let mut failing: Vec<u64> = r.failures.iter().map(|f| f.trial).collect();
    failing.dedup();
    out.failed = failing.len() as u64;
    out.passed = r.trials - out.failed;
    let mut v = serde_json::to_value(&r).expect("report serializes");
    if let Value::Object(map) = &mut v {
        map.insert("tolerance".into(), json!(NUMERIC_TOLERANCE));
    }
    out.results.push(v);
    Ok(out)
}

pub fn sharpness(a: &SharpnessArgs) -> Result<Outcome, CliError> {
    if a.id != "cor22" && a.id != "cor24" {
        return Err(CliError::Config(format!("sharpness supports cor22 and cor24, got {}", a.id)));
    }
    let id = InequalityId::parse(&a.id, Some(a.k), None)?;
    let betas = a.betas.clone().unwrap_or_else(|| default_beta_grid(a.k, a.beta_steps));
    let rows = sharpness_sweep(id, &betas, &a.n)?;
    let mut out = Outcome::new(&["beta", "N", "lhs", "rhs", "quotient", "gap"]);
    for r in &rows {
        let ok = r.gap >= -1e-9;
        out.tally(ok);
        out.csv_rows.push(vec![
            r.beta.to_string(),
            r.n.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.quotient.to_string(),
            r.gap.to_string(),
        ]);
        out.results.push(serde_json::to_value(r).expect("row serializes"));
    }
    Ok(out)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let id = InequalityId::parse(&a.id, a.k, a.m)?;
    let rows = sweep(id, &a.n, a.tol)?;
    let mut out = Outcome::new(&["N", "lambda_min", "paper_constant", "gap"]);
    let mut prev = f64::INFINITY;
    for r in &rows {
        let monotone = r.lambda_min <= prev + 2.0 * a.tol;
        prev = r.lambda_min;
        let ok = r.gap >= -a.tol && monotone;
        out.tally(ok);
        out.csv_rows.push(vec![
            r.n.to_string(),
            r.lambda_min.to_string(),
            r.paper_constant.to_string(),
            r.gap.to_string(),
        ]);
        let mut v = serde_json::to_value(r).expect("row serializes");
        if let Value::Object(map) = &mut v {
            map.insert("monotone".into(), json!(monotone));
        }
        out.results.push(v);
    }
    out.estimate = extrapolate(&rows).map(|f| serde_json::to_value(f).expect("fit serializes"));
    Ok(out)
}
