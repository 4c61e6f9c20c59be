//! Finitely supported sequences on `ℤ`, difference operators, weighted
//! quadratic forms and the exact Fourier bridge to [`crate::trigpoly`].

mod bridge;
mod forms;
mod scalar;
mod seq_json;

pub use bridge::{
    fourier, inverse_fourier, moment_bridge, parseval_bridge, side_condition, BridgeCheck, BridgeReport, SymbolCheck,
};
pub use forms::{form, form_value, FormId, QuadForm, Weight};
pub use scalar::{FormReal, FormValue, SeqScalar};
pub use seq_json::AnySeq;

use num_complex::Complex64;

use crate::rational::{rational_to_f64, GaussianRational};

pub type ExactSeq = FinSeq<GaussianRational>;
pub type NumericSeq = FinSeq<Complex64>;

/// A sequence that vanishes outside the window `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinSeq<T> {
    lo: i64,
    values: Vec<T>,
}

impl<T: SeqScalar> FinSeq<T> {
    /// Values for `lo, lo+1, …`.
    pub fn new(lo: i64, values: Vec<T>) -> Self {
        FinSeq { lo, values }
    }

    pub fn zero() -> Self {
        FinSeq { lo: 0, values: Vec::new() }
    }

    pub fn zeros(lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1).max(0) as usize;
        FinSeq { lo, values: vec![T::zero(); len] }
    }

    /// Unit mass at `n`.
    pub fn delta(n: i64) -> Self {
        FinSeq { lo: n, values: vec![T::from_int(1)] }
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl FnMut(i64) -> T) -> Self {
        FinSeq { lo, values: (lo..=hi).map(f).collect() }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// `lo − 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> T {
        let idx = n - self.lo;
        if idx < 0 || idx >= self.values.len() as i64 {
            T::zero()
        } else {
            self.values[idx as usize].clone()
        }
    }

    /// Widens the window if `n` lies outside it.
    pub fn set(&mut self, n: i64, v: T) {
        if self.values.is_empty() {
            self.lo = n;
            self.values.push(v);
            return;
        }
        if n < self.lo {
            let pad = (self.lo - n) as usize;
            let mut grown = vec![T::zero(); pad];
            grown.append(&mut self.values);
            self.values = grown;
            self.lo = n;
        } else if n > self.hi() {
            let pad = (n - self.hi()) as usize;
            self.values.extend(std::iter::repeat_n(T::zero(), pad));
        }
        let idx = (n - self.lo) as usize;
        self.values[idx] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> {
        self.values.iter().enumerate().map(move |(i, v)| (self.lo + i as i64, v))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        FinSeq { lo: self.lo, values: self.values.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.values.is_empty() {
            return other.clone();
        }
        if other.values.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        FinSeq::from_fn(lo, hi, |n| self.get(n) + other.get(n))
    }

    /// Applies `(Su)(n) = Σ_t c_t·u(n + offset + t)`.
    pub fn apply(&self, stencil: &Stencil) -> Self {
        if self.values.is_empty() {
            return FinSeq::zero();
        }
        let width = stencil.coeffs.len() as i64;
        let lo = self.lo - stencil.offset - (width - 1);
        let hi = self.hi() - stencil.offset;
        let coeffs: Vec<T> = stencil.coeffs.iter().map(|&c| T::from_int(c)).collect();
        FinSeq::from_fn(lo, hi, |n| {
            let mut acc = T::zero();
            for (t, c) in coeffs.iter().enumerate() {
                let v = self.get(n + stencil.offset + t as i64);
                if !v.is_zero() {
                    acc = acc + c.clone() * v;
                }
            }
            acc
        })
    }

    /// Backward difference `u(n) − u(n−1)`.
    pub fn backward_diff(&self) -> Self {
        self.apply(&Stencil::backward_diff())
    }

    /// `2u(n) − u(n−1) − u(n+1)`.
    pub fn laplacian(&self) -> Self {
        self.apply(&Stencil::laplacian())
    }

    pub fn laplacian_power(&self, m: u32) -> Self {
        self.apply(&Stencil::laplacian_power(m))
    }

    /// `D∘Δᵐ`.
    pub fn d_laplacian_power(&self, m: u32) -> Self {
        self.apply(&Stencil::d_laplacian_power(m))
    }

    pub fn admissibility(&self) -> Admissibility {
        let nonneg_support = self.iter().all(|(n, v)| n >= 0 || v.is_zero());
        let zero_prefix = self
            .iter()
            .find(|(n, v)| *n >= 0 && !v.is_zero())
            .map_or(u32::MAX, |(n, _)| n as u32);
        Admissibility { origin_zero: self.get(0).is_zero(), nonneg_support, zero_prefix }
    }
}

impl FinSeq<GaussianRational> {
    pub fn to_numeric(&self) -> NumericSeq {
        FinSeq {
            lo: self.lo,
            values: self.values.iter().map(|v| Complex64::new(rational_to_f64(&v.re), rational_to_f64(&v.im))).collect(),
        }
    }
}

/// Support and zero conditions of a sequence, computed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    pub origin_zero: bool,
    pub nonneg_support: bool,
    /// Largest `c` with `u(0) = … = u(c−1) = 0`; `u32::MAX` if `u` vanishes on `ℕ₀`.
    pub zero_prefix: u32,
}

impl Admissibility {
    /// `u(i) = 0` for `0 ≤ i < count`.
    pub fn has_zero_prefix(&self, count: u32) -> bool {
        self.zero_prefix >= count
    }
}

/// Finite-difference stencil `(Su)(n) = Σ_t coeffs[t]·u(n + offset + t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stencil {
    pub offset: i64,
    pub coeffs: Vec<i64>,
}

impl Stencil {
    pub fn identity() -> Self {
        Stencil { offset: 0, coeffs: vec![1] }
    }

    pub fn backward_diff() -> Self {
        Stencil { offset: -1, coeffs: vec![-1, 1] }
    }

    pub fn laplacian() -> Self {
        Stencil { offset: -1, coeffs: vec![-1, 2, -1] }
    }

    /// `(self∘inner)`.
    pub fn compose(&self, inner: &Stencil) -> Stencil {
        let mut coeffs = vec![0i64; self.coeffs.len() + inner.coeffs.len() - 1];
        for (t, a) in self.coeffs.iter().enumerate() {
            for (s, b) in inner.coeffs.iter().enumerate() {
                coeffs[t + s] += a * b;
            }
        }
        Stencil { offset: self.offset + inner.offset, coeffs }
    }

    pub fn laplacian_power(m: u32) -> Self {
        (0..m).fold(Stencil::identity(), |acc, _| Stencil::laplacian().compose(&acc))
    }

    pub fn d_laplacian_power(m: u32) -> Self {
        Stencil::backward_diff().compose(&Stencil::laplacian_power(m))
    }

    /// Number of subdiagonals of the Gram matrix `SᵀWS`.
    pub fn bandwidth(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Order of the difference operator (`D` is 1, `Δ` is 2, …).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::gauss_int;

    fn seq(lo: i64, vals: &[i64]) -> ExactSeq {
        FinSeq::new(lo, vals.iter().map(|&v| gauss_int(v, 0)).collect())
    }

    fn assert_same(a: &ExactSeq, b: &ExactSeq) {
        let lo = a.lo().min(b.lo());
        let hi = a.hi().max(b.hi());
        for n in lo..=hi {
            assert_eq!(a.get(n), b.get(n), "mismatch at n = {n}");
        }
    }

    #[test]
    fn backward_difference_examples() {
        assert_same(&ExactSeq::delta(1).backward_diff(), &seq(1, &[1, -1]));
        assert_same(&seq(1, &[1, 1, 1, 1]).backward_diff(), &seq(1, &[1, 0, 0, 0, -1]));
        assert_same(&seq(1, &[1, 2, 3]).backward_diff(), &seq(1, &[1, 1, 1, -3]));
    }

    #[test]
    fn laplacian_examples() {
        assert_same(&ExactSeq::delta(0).laplacian(), &seq(-1, &[-1, 2, -1]));
        assert_same(&ExactSeq::delta(0).laplacian_power(2), &seq(-2, &[1, -4, 6, -4, 1]));
        let linear = FinSeq::from_fn(-10, 10, |n| gauss_int(3 * n + 1, 0));
        let lap = linear.laplacian();
        for n in -9..=9 {
            assert!(lap.get(n).re == crate::rational::rat(0, 1));
        }
    }

    #[test]
    fn d_laplacian_is_composition() {
        let u = seq(-2, &[3, -1, 4, 1, -5, 9]);
        assert_same(&u.d_laplacian_power(2), &u.laplacian().laplacian().backward_diff());
    }

    #[test]
    fn admissibility_flags() {
        let u = seq(0, &[0, 0, 0, 2, 1]);
        let a = u.admissibility();
        assert!(a.origin_zero && a.nonneg_support && a.has_zero_prefix(3) && !a.has_zero_prefix(4));
        let v = seq(-1, &[1, 0, 1]);
        assert!(!v.admissibility().nonneg_support);
        assert!(ExactSeq::zero().admissibility().has_zero_prefix(50));
    }

    #[test]
    fn set_widens_window() {
        let mut u = ExactSeq::zero();
        u.set(3, gauss_int(1, 0));
        u.set(-2, gauss_int(2, 0));
        assert_eq!((u.lo(), u.hi()), (-2, 3));
        assert_eq!(u.get(3), gauss_int(1, 0));
        assert_eq!(u.get(0), gauss_int(0, 0));
    }
}
