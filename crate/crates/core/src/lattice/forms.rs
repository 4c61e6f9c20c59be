use serde::{Deserialize, Serialize};

use super::{FinSeq, FormReal, FormValue, SeqScalar, Stencil};
use crate::error::{Error, Result};

/// Weight `w(n)` multiplying `|(Su)(n)|²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "exp", rename_all = "snake_case")]
pub enum Weight {
    One,
    /// `n^p`; for `p < 0` the term `n = 0` is excluded.
    Power(i32),
    /// `(n − 1/2)^{2k}`.
    HalfShift(u32),
}

impl Weight {
    pub fn at<R: FormReal>(&self, n: i64) -> Option<R> {
        match *self {
            Weight::One => Some(R::one()),
            Weight::Power(p) if p < 0 && n == 0 => None,
            Weight::Power(p) => Some(R::from_int(n).powi(p)),
            Weight::HalfShift(k) => Some((R::from_int(2 * n - 1) / R::from_int(2)).powi(2 * k as i32)),
        }
    }

    pub fn has_negative_power(&self) -> bool {
        matches!(self, Weight::Power(p) if *p < 0)
    }
}

/// `Σ_n w(n)·|(Su)(n)|²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    pub stencil: Stencil,
    pub weight: Weight,
}

impl QuadForm {
    pub fn new(stencil: Stencil, weight: Weight) -> Self {
        QuadForm { stencil, weight }
    }

    pub fn moment(p: i32) -> Self {
        QuadForm::new(Stencil::identity(), Weight::Power(p))
    }

    pub fn evaluate<T: SeqScalar>(&self, u: &FinSeq<T>) -> Result<T::Real> {
        let su = u.apply(&self.stencil);
        if self.weight.has_negative_power() && !su.get(0).is_zero() {
            return Err(Error::Inadmissible("negative powers of n need a zero at n = 0".into()));
        }
        let mut acc = T::Real::zero();
        for (n, v) in su.iter() {
            if v.is_zero() {
                continue;
            }
            if let Some(w) = self.weight.at::<T::Real>(n) {
                acc = acc + w * v.abs_sq();
            }
        }
        Ok(acc)
    }
}

use num_traits::Zero;

/// The named quadratic forms appearing in the inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FormId {
    /// `Σ|Du|²(n−½)^{2k}`
    DiffHalfShift { k: u32 },
    /// `Σ|Du|²n^{2k}`
    DiffPower { k: u32 },
    /// `Σ|Δᵐu|²`
    Laplacian { m: u32 },
    /// `Σ|DΔᵐu|²`
    DLaplacian { m: u32 },
    /// `Σ|Δᵐu|²n^{2k}`
    LaplacianPower { m: u32, k: u32 },
    /// `Σ|DΔᵐu|²(n−½)^{2k}`
    DLaplacianHalfShift { m: u32, k: u32 },
    /// `Σ|u|²n^p`
    Moment { p: i32 },
}

impl FormId {
    pub fn quad_form(&self) -> QuadForm {
        match *self {
            FormId::DiffHalfShift { k } => QuadForm::new(Stencil::backward_diff(), Weight::HalfShift(k)),
            FormId::DiffPower { k } => QuadForm::new(Stencil::backward_diff(), Weight::Power(2 * k as i32)),
            FormId::Laplacian { m } => QuadForm::new(Stencil::laplacian_power(m), Weight::One),
            FormId::DLaplacian { m } => QuadForm::new(Stencil::d_laplacian_power(m), Weight::One),
            FormId::LaplacianPower { m, k } => {
                QuadForm::new(Stencil::laplacian_power(m), Weight::Power(2 * k as i32))
            }
            FormId::DLaplacianHalfShift { m, k } => {
                QuadForm::new(Stencil::d_laplacian_power(m), Weight::HalfShift(k))
            }
            FormId::Moment { p } => QuadForm::moment(p),
        }
    }

    /// Parses the snake-case name used on the command line.
    pub fn from_name(name: &str, k: u32, m: u32, p: i32) -> Result<FormId> {
        Ok(match name {
            "diff_half_shift" => FormId::DiffHalfShift { k },
            "diff_power" => FormId::DiffPower { k },
            "laplacian" => FormId::Laplacian { m },
            "d_laplacian" => FormId::DLaplacian { m },
            "laplacian_power" => FormId::LaplacianPower { m, k },
            "d_laplacian_half_shift" => FormId::DLaplacianHalfShift { m, k },
            "moment" => FormId::Moment { p },
            other => return Err(Error::UnknownForm(other.to_string())),
        })
    }
}

pub fn form_value<T: SeqScalar>(u: &FinSeq<T>, id: FormId) -> Result<T::Real> {
    id.quad_form().evaluate(u)
}

pub fn form<T: SeqScalar>(u: &FinSeq<T>, id: FormId) -> Result<FormValue> {
    form_value(u, id).map(FormReal::into_form_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ExactSeq;
    use crate::rational::{gauss_int, rat, Rational};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_examples() {
        let d1 = ExactSeq::delta(1);
        assert_eq!(form(&d1, FormId::Moment { p: -2 }).unwrap(), FormValue::Exact(rat(1, 1)));
        assert_eq!(form(&d1, FormId::Laplacian { m: 1 }).unwrap(), FormValue::Exact(rat(6, 1)));
        assert_eq!(form(&d1, FormId::DiffHalfShift { k: 1 }).unwrap(), FormValue::Exact(rat(5, 2)));
    }

    #[test]
    fn negative_power_needs_origin_zero() {
        let d0 = ExactSeq::delta(0);
        assert!(matches!(form(&d0, FormId::Moment { p: -2 }), Err(Error::Inadmissible(_))));
        assert!(matches!(FormId::from_name("nope", 1, 1, 0), Err(Error::UnknownForm(_))));
    }

    // Naive double loop over the support window, independent of FinSeq::apply.
    fn brute(u: &ExactSeq, stencil: &Stencil, weight: impl Fn(i64) -> Option<Rational>) -> Rational {
        let reach = stencil.coeffs.len() as i64 + stencil.offset.abs() + 2;
        let mut total = Rational::zero();
        for n in (u.lo() - reach)..=(u.hi() + reach) {
            let mut re = Rational::zero();
            let mut im = Rational::zero();
            for (t, c) in stencil.coeffs.iter().enumerate() {
                let v = u.get(n + stencil.offset + t as i64);
                re += &v.re * rat(*c, 1);
                im += &v.im * rat(*c, 1);
            }
            if let Some(w) = weight(n) {
                total += w * (&re * &re + &im * &im);
            }
        }
        total
    }

    #[test]
    fn forms_match_brute_force() {
        let u = ExactSeq::delta(2).add(&ExactSeq::delta(3));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = ExactSeq::from_fn(1, 9, |_| gauss_int(rng.gen_range(-5..=5), rng.gen_range(-5..=5)));
        for seq in [&u, &v] {
            for id in [
                FormId::DiffHalfShift { k: 2 },
                FormId::DiffPower { k: 3 },
                FormId::Laplacian { m: 2 },
                FormId::DLaplacian { m: 1 },
                FormId::LaplacianPower { m: 1, k: 2 },
                FormId::DLaplacianHalfShift { m: 2, k: 3 },
                FormId::Moment { p: -4 },
                FormId::Moment { p: 3 },
            ] {
                let q = id.quad_form();
                let expected = brute(seq, &q.stencil, |n| q.weight.at::<Rational>(n));
                assert_eq!(form_value(seq, id).unwrap(), expected, "{id:?}");
            }
        }
    }

    #[test]
    fn numeric_mode_tracks_exact_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = ExactSeq::from_fn(1, 25, |_| {
            crate::rational::gauss(rat(rng.gen_range(-20..=20), rng.gen_range(1..=20)), rat(rng.gen_range(-20..=20), rng.gen_range(1..=20)))
        });
        let un = u.to_numeric();
        for id in [FormId::DiffHalfShift { k: 3 }, FormId::LaplacianPower { m: 2, k: 4 }, FormId::Moment { p: -6 }] {
            let exact = form_value(&u, id).unwrap().to_f64();
            let numeric: f64 = form_value::<Complex64>(&un, id).unwrap();
            assert!(((exact - numeric) / exact).abs() < 1e-12, "{id:?}: {exact} vs {numeric}");
        }
    }
}
