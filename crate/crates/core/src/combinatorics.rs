//! Exact constants of the weighted Hardy and Rellich inequalities.
//!
//! Everything here is computed with arbitrary-precision integers and
//! rationals. The two families of Leibniz constants (`alpha`, `beta`) come in
//! a raw variant, evaluated from the `xi` double sum, and a simplified closed
//! form; their agreement is equivalent to the closed form of `xi` checked by
//! [`verify_xi_closed_form`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, rat_int, sign_factor, Rational};

/// Binomial coefficient with the convention `binom(n, r) = 0` for `r < 0` or `r > n`.
pub fn binom(n: i64, r: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::NegativeArgument(format!("binom({n}, {r})")));
    }
    if r < 0 || r > n {
        return Ok(BigInt::zero());
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for j in 0..r {
        acc *= n - j;
        acc /= j + 1;
    }
    Ok(acc)
}

/// Rows `0..=n_max` of Pascal's triangle.
#[derive(Debug, Clone)]
pub struct Pascal {
    rows: Vec<Vec<BigInt>>,
}

impl Pascal {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = vec![BigInt::one(); n + 1];
            for r in 1..n {
                row[r] = &rows[n - 1][r - 1] + &rows[n - 1][r];
            }
            rows.push(row);
        }
        Pascal { rows }
    }

    pub fn get(&self, n: i64, r: i64) -> BigInt {
        if n < 0 || r < 0 || r > n {
            return BigInt::zero();
        }
        self.rows[n as usize][r as usize].clone()
    }
}

fn check_index(k: u32, i: u32, lo: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::ParameterRange("k must be at least 1".into()));
    }
    if i < lo || i > k {
        return Err(Error::IndexOutOfRange(format!("i = {i} outside [{lo}, {k}]")));
    }
    Ok(())
}

fn xi_with(p: &Pascal, k: i64, i: i64) -> BigInt {
    let mut sum = BigInt::zero();
    for m in 0..=i.min(k - i) {
        let outer = p.get(k + 1, i - m);
        if outer.is_zero() {
            continue;
        }
        // binom(n-1, m) vanishes unless n > m, so the power of two is never fractional.
        for n in (m + 1)..=(k - i) {
            let term = (&outer * p.get(k, i + n) * p.get(n - 1, m)) << ((n - m) as usize);
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
    }
    sum
}

/// The signed double sum over `0 ≤ m ≤ min(i, k−i)`, `1 ≤ n ≤ k−i` that
/// collects the cross terms of the Leibniz expansion of `dᵏ(u·sin(x/2))`.
pub fn xi(k: u32, i: u32) -> Result<Rational> {
    check_index(k, i, 0)?;
    let p = Pascal::new(k as usize + 1);
    Ok(rat_int(xi_with(&p, k as i64, i as i64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Evaluated through `xi`.
    Raw,
    /// Closed binomial form.
    Simplified,
}

fn pow4_inv(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << (2 * e as usize))
}

fn alpha_raw_from(k: u32, i: u32, xi: &BigInt, p: &Pascal) -> Rational {
    let (ki, ii) = (k as i64, i as i64);
    let s = sign_factor(ki - ii);
    let half = rat(1, 2);
    let b2k = rat_int(p.get(2 * ki, 2 * ii));
    let bk = rat_int(p.get(ki, ii));
    let val = &half * b2k - &half * &s * &bk * &bk - &half * &s * rat_int(xi.clone());
    val * pow4_inv(k - i)
}

fn beta_raw_from(k: u32, i: u32, xi: &BigInt, p: &Pascal) -> Rational {
    let s = sign_factor(k as i64 - i as i64);
    let bk = rat_int(p.get(k as i64, i as i64));
    (&s * rat_int(xi.clone()) + &s * &bk * &bk) * pow4_inv(k - i)
}

fn alpha_simplified(k: u32, i: u32) -> Rational {
    let b2k = binom(2 * k as i64, 2 * i as i64).expect("nonnegative");
    let bk = binom(k as i64, i as i64).expect("nonnegative");
    Rational::new(b2k - bk, BigInt::from(2)) * pow4_inv(k - i)
}

fn beta_simplified(k: u32, i: u32) -> Rational {
    rat_int(binom(k as i64, i as i64).expect("nonnegative")) * pow4_inv(k - i)
}

/// Coefficient of `∫|dⁱu|²` in the expansion of `∫|dᵏ(u·sin(x/2))|²`.
pub fn alpha(k: u32, i: u32, variant: Variant) -> Result<Rational> {
    check_index(k, i, 0)?;
    Ok(match variant {
        Variant::Simplified => alpha_simplified(k, i),
        Variant::Raw => {
            let p = Pascal::new(2 * k as usize + 1);
            alpha_raw_from(k, i, &xi_with(&p, k as i64, i as i64), &p)
        }
    })
}

/// Coefficient of `∫|dⁱu|²·sin²(x/2)` in the same expansion.
pub fn beta(k: u32, i: u32, variant: Variant) -> Result<Rational> {
    check_index(k, i, 0)?;
    Ok(match variant {
        Variant::Simplified => beta_simplified(k, i),
        Variant::Raw => {
            let p = Pascal::new(k as usize + 1);
            beta_raw_from(k, i, &xi_with(&p, k as i64, i as i64), &p)
        }
    })
}

/// `4·alpha(k, k−i) + beta(k, k−i+1)/4`, the weight of `Σ|u|²n^{2k−2i}`
/// in the improved weighted Hardy inequality.
pub fn gamma(k: u32, i: u32) -> Result<Rational> {
    check_index(k, i, 1)?;
    Ok(rat(4, 1) * alpha_simplified(k, k - i) + rat(1, 4) * beta_simplified(k, k - i + 1))
}

/// The published closed form `4^{−(k−i)}·(2·C(2k,2i) − 2·C(k,i) + C(k,i−1)/4)`,
/// kept verbatim so the discrepancy with [`gamma`] can be reported.
pub fn gamma_printed(k: u32, i: u32) -> Result<Rational> {
    check_index(k, i, 1)?;
    let (ki, ii) = (k as i64, i as i64);
    let val = rat(2, 1) * rat_int(binom(2 * ki, 2 * ii)?) - rat(2, 1) * rat_int(binom(ki, ii)?)
        + rat(1, 4) * rat_int(binom(ki, ii - 1)?);
    Ok(val * pow4_inv(k - i))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub k: u32,
    pub i: u32,
    #[serde(with = "crate::rational::serde_rational")]
    pub xi: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub beta: Rational,
    /// Defined for `1 ≤ i ≤ k` only.
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub gamma: Option<Rational>,
    #[serde(with = "crate::rational::serde_rational_opt")]
    pub gamma_printed: Option<Rational>,
}

/// All constants for one `k`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantTable {
    pub k: u32,
    pub rows: Vec<ConstantRow>,
}

pub const CSV_HEADER: [&str; 7] = ["k", "i", "xi", "alpha", "beta", "gamma", "gamma_printed"];

impl ConstantTable {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ParameterRange("k must be at least 1".into()));
        }
        let p = Pascal::new(2 * k as usize + 1);
        let mut rows = Vec::with_capacity(k as usize + 1);
        for i in 0..=k {
            let x = xi_with(&p, k as i64, i as i64);
            let (g, gp) = if i >= 1 {
                (Some(gamma(k, i)?), Some(gamma_printed(k, i)?))
            } else {
                (None, None)
            };
            rows.push(ConstantRow {
                k,
                i,
                alpha: alpha_raw_from(k, i, &x, &p),
                beta: beta_raw_from(k, i, &x, &p),
                xi: rat_int(x),
                gamma: g,
                gamma_printed: gp,
            });
        }
        Ok(ConstantTable { k, rows })
    }

    pub fn alpha(&self, i: u32) -> &Rational {
        &self.rows[i as usize].alpha
    }

    pub fn beta(&self, i: u32) -> &Rational {
        &self.rows[i as usize].beta
    }

    /// Panics unless `1 ≤ i ≤ k`.
    pub fn gamma(&self, i: u32) -> &Rational {
        self.rows[i as usize].gamma.as_ref().expect("gamma is indexed from 1")
    }

    pub fn csv_records(&self) -> Vec<Vec<String>> {
        let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.i.to_string(),
                    format_rational(&r.xi),
                    format_rational(&r.alpha),
                    format_rational(&r.beta),
                    opt(&r.gamma),
                    opt(&r.gamma_printed),
                ]
            })
            .collect()
    }
}

/// Shared cache; tables are reused by the inequality and spectral modules.
pub fn constant_table(k: u32) -> Result<Arc<ConstantTable>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ConstantTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache poisoned").get(&k) {
        return Ok(t.clone());
    }
    let table = Arc::new(ConstantTable::new(k)?);
    cache.lock().expect("cache poisoned").entry(k).or_insert_with(|| table.clone());
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub i: u32,
    #[serde(with = "crate::rational::serde_rational")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub k: u32,
    pub cases: Vec<IdentityCase>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Checks `xi(k, i) = (−1)^{k−i}·C(k,i) − C(k,i)²` for every `0 ≤ i ≤ k`.
/// Counterexamples are reported, not raised.
pub fn verify_xi_closed_form(k: u32) -> Result<IdentityReport> {
    if k == 0 {
        return Err(Error::ParameterRange("k must be at least 1".into()));
    }
    let p = Pascal::new(k as usize + 1);
    let ki = k as i64;
    let cases = (0..=k)
        .map(|i| {
            let ii = i as i64;
            let lhs = xi_with(&p, ki, ii);
            let b = p.get(ki, ii);
            let signed = if (ki - ii) % 2 == 0 { b.clone() } else { -b.clone() };
            let rhs = signed - &b * &b;
            IdentityCase { i, pass: lhs == rhs, lhs: rat_int(lhs), rhs: rat_int(rhs) }
        })
        .collect();
    Ok(IdentityReport { k, cases })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinomialSumReport {
    pub k: u32,
    pub n: i64,
    pub plus_pass: bool,
    pub minus_pass: bool,
}

impl BinomialSumReport {
    pub fn passed(&self) -> bool {
        self.plus_pass && self.minus_pass
    }
}

/// `Σᵢ C(2k,2i)(n±1)^{2i} = ((n±2)^{2k} + n^{2k})/2`, both signs, exactly.
pub fn verify_even_binomial_sums(k: u32, n: i64) -> Result<BinomialSumReport> {
    if k == 0 {
        return Err(Error::ParameterRange("k must be at least 1".into()));
    }
    let p = Pascal::new(2 * k as usize);
    let check = |shift: i64| {
        let base = BigInt::from(n + shift);
        let lhs: BigInt = (0..=k as i64).map(|i| p.get(2 * k as i64, 2 * i) * base.pow(2 * i as u32)).sum();
        let two_lhs = lhs * 2;
        let rhs = BigInt::from(n + 2 * shift).pow(2 * k) + BigInt::from(n).pow(2 * k);
        two_lhs == rhs
    };
    Ok(BinomialSumReport { k, n, plus_pass: check(1), minus_pass: check(-1) })
}

/// `k(k−1)(k−3/2)²`, the one-step factor of the weighted Rellich chain.
pub fn rellich_weight_c(k: i64) -> Rational {
    let kk = rat_int(k);
    let shifted = &kk - rat(3, 2);
    &kk * (&kk - Rational::one()) * &shifted * &shifted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Operator `Δᵐ`.
    Even,
    /// Operator `D·Δᵐ`.
    Odd,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// `2^{2m−3}(2m−1)!` for `Δᵐ` and `2^{2m−2}(2m)!` for `D·Δᵐ`.
pub fn higher_order_const(m: u32, parity: Parity) -> Result<Rational> {
    if m == 0 {
        return Err(Error::ParameterRange("m must be at least 1".into()));
    }
    let (exp, fact) = match parity {
        Parity::Even => (2 * m as i64 - 3, factorial(2 * m - 1)),
        Parity::Odd => (2 * m as i64 - 2, factorial(2 * m)),
    };
    let pow2 = if exp >= 0 {
        rat_int(BigInt::one() << exp as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-exp) as usize)
    };
    Ok(pow2 * rat_int(fact))
}

/// Constant of the power-weighted higher-order inequality:
/// `∏_{i<m} C(k−2i)` (even) or `(2k−1)²/4·∏_{i<m} C(k−1−2i)` (odd).
pub fn product_const(m: u32, k: u32, parity: Parity) -> Result<Rational> {
    if m == 0 {
        return Err(Error::ParameterRange("m must be at least 1".into()));
    }
    let (m, k) = (m as i64, k as i64);
    match parity {
        Parity::Even => {
            if k < 2 * m {
                return Err(Error::ParameterRange(format!("even variant needs k ≥ 2m, got k = {k}, m = {m}")));
            }
            Ok((0..m).map(|i| rellich_weight_c(k - 2 * i)).product())
        }
        Parity::Odd => {
            if k < 2 * m + 1 {
                return Err(Error::ParameterRange(format!("odd variant needs k ≥ 2m+1, got k = {k}, m = {m}")));
            }
            let lead = rat_int((2 * k - 1) * (2 * k - 1)) / rat_int(4);
            Ok(lead * (0..m).map(|i| rellich_weight_c(k - 1 - 2 * i)).product::<Rational>())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErratumEntry {
    pub k: u32,
    pub i: u32,
    #[serde(with = "crate::rational::serde_rational")]
    pub gamma: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub gamma_printed: Rational,
    pub consistent: bool,
}

/// Compares the published closed form for `gamma` with the defining
/// combination of `alpha` and `beta` for every `1 ≤ i ≤ k ≤ k_max`.
pub fn printed_gamma_discrepancies(k_max: u32) -> Result<Vec<ErratumEntry>> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        for i in 1..=k {
            let g = gamma(k, i)?;
            let gp = gamma_printed(k, i)?;
            out.push(ErratumEntry { k, i, consistent: g == gp, gamma: g, gamma_printed: gp });
        }
    }
    Ok(out)
}

/// True when every `alpha`, `beta`, `gamma` of the table is nonnegative and
/// `beta`, `gamma` are strictly positive.
pub fn constants_positive(table: &ConstantTable) -> bool {
    table.rows.iter().all(|r| {
        !r.alpha.is_negative() && r.beta.is_positive() && r.gamma.as_ref().is_none_or(|g| g.is_positive())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small_cases() {
        assert_eq!(binom(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binom(7, 7).unwrap(), BigInt::one());
        assert_eq!(binom(3, 5).unwrap(), BigInt::zero());
        assert_eq!(binom(3, -1).unwrap(), BigInt::zero());
        assert!(matches!(binom(-1, 0), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn pascal_matches_binom() {
        let p = Pascal::new(30);
        for n in 0..=30 {
            for r in -1..=31 {
                assert_eq!(p.get(n, r), binom(n, r).unwrap());
            }
        }
    }

    // Term-by-term evaluation of the double sum, written independently of xi_with.
    fn xi_naive(k: i64, i: i64) -> BigInt {
        let mut s = BigInt::zero();
        for m in 0..=i.min(k - i) {
            for n in 1..=(k - i) {
                let b = binom(k + 1, i - m).unwrap() * binom(k, i + n).unwrap() * binom(n - 1, m).unwrap();
                if b.is_zero() {
                    continue;
                }
                let e = n - m;
                let t = if e >= 0 { b << e as usize } else { b >> (-e) as usize };
                s += if n % 2 == 0 { t } else { -t };
            }
        }
        s
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(2, 1).unwrap(), rat(-6, 1));
        assert_eq!(xi(2, 0).unwrap(), rat(0, 1));
        for k in 1..=12 {
            assert_eq!(xi(k, k).unwrap(), rat(0, 1));
            for i in 0..=k {
                assert_eq!(xi(k, i).unwrap(), rat_int(xi_naive(k as i64, i as i64)));
            }
        }
        assert!(matches!(xi(3, 4), Err(Error::IndexOutOfRange(_))));
        assert!(xi(0, 0).is_err());
    }

    #[test]
    fn alpha_beta_examples() {
        for v in [Variant::Raw, Variant::Simplified] {
            assert_eq!(alpha(2, 0, v).unwrap(), rat(0, 1));
            assert_eq!(beta(2, 1, v).unwrap(), rat(1, 2));
            for k in 1..=8 {
                assert_eq!(alpha(k, k, v).unwrap(), rat(0, 1));
                assert_eq!(beta(k, k, v).unwrap(), rat(1, 1));
            }
        }
        assert_eq!(beta(1, 0, Variant::Raw).unwrap(), rat(1, 4));
        assert!(alpha(2, 3, Variant::Raw).is_err());
    }

    #[test]
    fn raw_and_simplified_agree() {
        for k in 1..=25 {
            for i in 0..=k {
                assert_eq!(alpha(k, i, Variant::Raw).unwrap(), alpha(k, i, Variant::Simplified).unwrap());
                assert_eq!(beta(k, i, Variant::Raw).unwrap(), beta(k, i, Variant::Simplified).unwrap());
            }
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(1, 1).unwrap(), rat(1, 4));
        assert_eq!(gamma(2, 2).unwrap(), rat(1, 8));
        assert_eq!(gamma(2, 1).unwrap(), rat(9, 4));
        for k in 1..=20i64 {
            assert_eq!(gamma(k as u32, 1).unwrap(), rat((2 * k - 1) * (2 * k - 1), 4));
        }
        assert!(gamma(3, 0).is_err());
    }

    #[test]
    fn printed_gamma_examples() {
        assert_eq!(gamma_printed(1, 1).unwrap(), rat(1, 4));
        assert_eq!(gamma_printed(2, 1).unwrap(), rat(33, 16));
        assert_eq!(gamma_printed(2, 2).unwrap(), rat(1, 2));
        assert_ne!(gamma_printed(2, 1).unwrap(), gamma(2, 1).unwrap());
        let d = printed_gamma_discrepancies(3).unwrap();
        assert!(d.iter().find(|e| e.k == 1).unwrap().consistent);
        assert!(!d.iter().find(|e| e.k == 2 && e.i == 1).unwrap().consistent);
    }

    #[test]
    fn closed_form_identity_small() {
        let r = verify_xi_closed_form(2).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases[1].lhs, rat(-6, 1));
        assert_eq!(r.cases[1].rhs, rat(-6, 1));
        assert_eq!(r.cases[2].lhs, rat(0, 1));
    }

    #[test]
    fn binomial_sums() {
        for n in -5..=5 {
            assert!(verify_even_binomial_sums(1, n).unwrap().passed());
        }
        assert!(verify_even_binomial_sums(3, 5).unwrap().passed());
        assert!(verify_even_binomial_sums(10, -7).unwrap().passed());
    }

    #[test]
    fn higher_order_constants() {
        assert_eq!(higher_order_const(1, Parity::Even).unwrap(), rat(1, 2));
        assert_eq!(higher_order_const(2, Parity::Even).unwrap(), rat(12, 1));
        assert_eq!(higher_order_const(1, Parity::Odd).unwrap(), rat(2, 1));
        assert_eq!(rellich_weight_c(1), rat(0, 1));
        assert_eq!(rellich_weight_c(2), rat(1, 2));
        assert_eq!(product_const(1, 2, Parity::Even).unwrap(), rat(1, 2));
        assert_eq!(product_const(1, 3, Parity::Odd).unwrap(), rat(25, 8));
        assert!(product_const(2, 3, Parity::Even).is_err());
        assert!(product_const(1, 2, Parity::Odd).is_err());
    }

    #[test]
    fn table_is_cached_and_positive() {
        let a = constant_table(6).unwrap();
        let b = constant_table(6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(constants_positive(&a));
        assert_eq!(a.csv_records().len(), 7);
        assert_eq!(a.csv_records()[0][5], "");
    }
}
