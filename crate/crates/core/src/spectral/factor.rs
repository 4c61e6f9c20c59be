//! Banded `LDLᵀ` without pivoting, generic over the arithmetic.

use std::cmp::Ordering;

use astro_float::{BigFloat, RoundingMode};
use num_bigint::{BigInt, Sign};

use crate::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arithmetic used by the factorization.
pub trait Arith: Clone + Send + Sync {
    type Ctx: Copy + Send + Sync;
    fn from_f64(x: f64, ctx: Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    fn add(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn sub(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn div(&self, o: &Self, ctx: Self::Ctx) -> Self;
    fn sign(&self) -> Ordering;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_f64(0.0, ctx)
    }

    fn powi(&self, e: u32, ctx: Self::Ctx) -> Self {
        let mut acc = Self::from_f64(1.0, ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        acc
    }
}

impl Arith for f64 {
    type Ctx = ();
    fn from_f64(x: f64, _: ()) -> Self {
        x
    }
    fn from_rational(r: &Rational, _: ()) -> Self {
        crate::rational::rational_to_f64(r)
    }
    fn add(&self, o: &Self, _: ()) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: ()) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: ()) -> Self {
        self * o
    }
    fn div(&self, o: &Self, _: ()) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        self.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }
}

/// Binary precision in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bits(pub usize);

fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u32_digits();
    let radix = BigFloat::from_f64(4294967296.0, p);
    let mut acc = BigFloat::from_f64(0.0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&radix, p, RM).add(&BigFloat::from_f64(*d as f64, p), p, RM);
    }
    if sign == Sign::Minus {
        acc.neg()
    } else {
        acc
    }
}

impl Arith for BigFloat {
    type Ctx = Bits;
    fn from_f64(x: f64, c: Bits) -> Self {
        BigFloat::from_f64(x, c.0)
    }
    fn from_rational(r: &Rational, c: Bits) -> Self {
        bigint_to_bigfloat(r.numer(), c.0).div(&bigint_to_bigfloat(r.denom(), c.0), c.0, RM)
    }
    fn add(&self, o: &Self, c: Bits) -> Self {
        BigFloat::add(self, o, c.0, RM)
    }
    fn sub(&self, o: &Self, c: Bits) -> Self {
        BigFloat::sub(self, o, c.0, RM)
    }
    fn mul(&self, o: &Self, c: Bits) -> Self {
        BigFloat::mul(self, o, c.0, RM)
    }
    fn div(&self, o: &Self, c: Bits) -> Self {
        BigFloat::div(self, o, c.0, RM)
    }
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Symmetric band matrix, lower band stored row by row:
/// entry `(i, i − t)` sits at `data[i·(b+1) + t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Band<T> {
    pub dim: usize,
    pub bandwidth: usize,
    pub data: Vec<T>,
}

impl<T: Arith> Band<T> {
    pub fn zeros(dim: usize, bandwidth: usize, ctx: T::Ctx) -> Self {
        Band { dim, bandwidth, data: vec![T::zero(ctx); dim * (bandwidth + 1)] }
    }

    /// Entry `(i, j)` with `j ≤ i ≤ j + b`.
    pub fn lower(&self, i: usize, j: usize) -> &T {
        &self.data[i * (self.bandwidth + 1) + (i - j)]
    }

    pub fn lower_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * (self.bandwidth + 1) + (i - j)]
    }
}

/// Outcome of factoring `A − λB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inertia {
    /// Number of negative pivots (all of them, or 1 if stopped early).
    Negative(usize),
    /// A pivot was exactly zero.
    Breakdown,
}

/// Factors `A − λ·diag(b)` and counts negative pivots; with `stop_at_first`
/// it returns as soon as one is found.
pub fn inertia<T: Arith>(a: &Band<T>, b_diag: &[T], lambda: f64, ctx: T::Ctx, stop_at_first: bool) -> Inertia {
    let n = a.dim;
    let bw = a.bandwidth;
    let lam = T::from_f64(lambda, ctx);
    let slots = bw + 1;
    // rolling storage of the last bw+1 rows: L[row][t] = L_{row, row−t}, and pivots
    let mut l_rows: Vec<Vec<T>> = vec![vec![T::zero(ctx); slots]; slots];
    let mut pivots: Vec<T> = vec![T::zero(ctx); slots];
    let mut w = vec![T::zero(ctx); slots];
    let mut negatives = 0;
    for j in 0..n {
        let lo = j.saturating_sub(bw);
        // w[t] = W_{j, j−t} = M_{j,k} − Σ_{k'<k} W_{j,k'}·L_{k,k'}
        for k in lo..j {
            let t = j - k;
            let mut s = a.lower(j, k).clone();
            let k_lo = lo.max(k.saturating_sub(bw));
            for kp in k_lo..k {
                let l_k = &l_rows[k % slots][k - kp];
                s = s.sub(&w[j - kp].mul(l_k, ctx), ctx);
            }
            w[t] = s;
        }
        let mut d = a.lower(j, j).sub(&lam.mul(&b_diag[j], ctx), ctx);
        let row = j % slots;
        for k in lo..j {
            let t = j - k;
            let l = w[t].div(&pivots[k % slots], ctx);
            d = d.sub(&w[t].mul(&l, ctx), ctx);
            l_rows[row][t] = l;
        }
        match d.sign() {
            Ordering::Equal => return Inertia::Breakdown,
            Ordering::Less => {
                negatives += 1;
                if stop_at_first {
                    return Inertia::Negative(negatives);
                }
            }
            Ordering::Greater => {}
        }
        pivots[row] = d;
    }
    Inertia::Negative(negatives)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_band(rows: &[&[f64]], bw: usize) -> Band<f64> {
        let n = rows.len();
        let mut a = Band::zeros(n, bw, ());
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                *a.lower_mut(i, j) = rows[i][j];
            }
        }
        a
    }

    #[test]
    fn counts_eigenvalues_below_shift() {
        // eigenvalues of tridiag(−1, 2, −1) of size 4: 2 − 2cos(jπ/5)
        let a = dense_band(
            &[&[2.0, -1.0, 0.0, 0.0], &[-1.0, 2.0, -1.0, 0.0], &[0.0, -1.0, 2.0, -1.0], &[0.0, 0.0, -1.0, 2.0]],
            1,
        );
        let eig: Vec<f64> = (1..=4).map(|j| 2.0 - 2.0 * (j as f64 * std::f64::consts::PI / 5.0).cos()).collect();
        let ones = vec![1.0; 4];
        for (idx, shift) in [0.1, 0.5, 1.5, 2.5, 3.7, 4.0].into_iter().enumerate() {
            let expected = eig.iter().filter(|&&e| e < shift).count();
            assert_eq!(inertia(&a, &ones, shift, (), false), Inertia::Negative(expected), "case {idx}");
        }
        assert_eq!(inertia(&a, &ones, 2.0, (), false), Inertia::Breakdown);
    }

    #[test]
    fn big_float_matches_f64_on_small_band() {
        let a = dense_band(
            &[
                &[6.0, -4.0, 1.0, 0.0, 0.0],
                &[-4.0, 6.0, -4.0, 1.0, 0.0],
                &[1.0, -4.0, 6.0, -4.0, 1.0],
                &[0.0, 1.0, -4.0, 6.0, -4.0],
                &[0.0, 0.0, 1.0, -4.0, 6.0],
            ],
            2,
        );
        let ctx = Bits(192);
        let big = Band {
            dim: a.dim,
            bandwidth: a.bandwidth,
            data: a.data.iter().map(|&x| <BigFloat as Arith>::from_f64(x, ctx)).collect(),
        };
        let b: Vec<f64> = (1..=5).map(|n| 1.0 / n as f64).collect();
        let bb: Vec<BigFloat> = b.iter().map(|&x| <BigFloat as Arith>::from_f64(x, ctx)).collect();
        for shift in [0.01, 0.3, 1.0, 5.0, 20.0, 80.0] {
            assert_eq!(inertia(&a, &b, shift, (), false), inertia(&big, &bb, shift, ctx, false), "shift {shift}");
        }
    }

    #[test]
    fn rational_conversion() {
        let r = crate::rational::rat(-7, 8);
        let x = <BigFloat as Arith>::from_rational(&r, Bits(128));
        assert_eq!(x, BigFloat::from_f64(-0.875, 128));
        let huge = Rational::from_integer(BigInt::from(3).pow(100));
        let y = <BigFloat as Arith>::from_rational(&huge, Bits(256));
        assert_eq!(Arith::sign(&y), Ordering::Greater);
    }
}
