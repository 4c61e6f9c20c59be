//! Finite-window truncations of each inequality as a generalized eigenvalue
//! problem `Au = λBu`, with `A` banded and `B` diagonal, and the smallest
//! eigenvalue found by inertia bisection.

mod factor;

pub use factor::{inertia, Arith, Band, Bits, Inertia};

use astro_float::BigFloat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{InequalityId, RhsTerm};
use crate::lattice::{Stencil, Weight};
use crate::rational::{rational_to_f64, Rational};

/// Symmetric band matrix of doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    band: Band<f64>,
}

impl BandedSymMatrix {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        BandedSymMatrix { band: Band::zeros(dim, bandwidth, ()) }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = BandedSymMatrix::zeros(d.len(), 0);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, *x);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.band.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.band.bandwidth
    }

    /// Zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.band.bandwidth {
            0.0
        } else {
            *self.band.lower(i, j)
        }
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.band.bandwidth, "entry ({i}, {j}) outside the band");
        *self.band.lower_mut(i, j) = v;
    }

    /// `uᵀAu`.
    pub fn quad_form(&self, u: &[f64]) -> f64 {
        let b = self.band.bandwidth;
        let mut total = 0.0;
        for i in 0..self.dim() {
            total += self.get(i, i) * u[i] * u[i];
            for j in i.saturating_sub(b)..i {
                total += 2.0 * self.get(i, j) * u[i] * u[j];
            }
        }
        total
    }

    pub fn band(&self) -> &Band<f64> {
        &self.band
    }
}

/// How a pencil was built, kept so it can be re-assembled in higher precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilStructure {
    pub id: InequalityId,
    pub stencil: Stencil,
    pub weight: Weight,
    pub rhs: Vec<RhsTerm>,
}

/// `(A, B)` on the trial window `[first, last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub a: BandedSymMatrix,
    pub b_diag: Vec<f64>,
    /// Lattice index of the first trial unknown.
    pub first: i64,
    pub structure: Option<PencilStructure>,
}

impl Pencil {
    /// A pencil from explicit matrices; `b_diag` must be strictly positive.
    pub fn new(a: BandedSymMatrix, b_diag: Vec<f64>) -> Result<Pencil> {
        if a.dim() != b_diag.len() {
            return Err(Error::ParameterRange(format!("A is {0}x{0} but B has {1} entries", a.dim(), b_diag.len())));
        }
        if let Some(x) = b_diag.iter().find(|x| !(**x > 0.0)) {
            return Err(Error::ParameterRange(format!("B must be positive, found {x}")));
        }
        Ok(Pencil { a, b_diag, first: 0, structure: None })
    }

    pub fn dim(&self) -> usize {
        self.b_diag.len()
    }

    pub fn last(&self) -> i64 {
        self.first + self.dim() as i64 - 1
    }

    /// Working precision for the bisection, from operator order, weight
    /// growth and window length.
    pub fn precision_bits(&self) -> usize {
        let lg = (self.last().max(self.dim() as i64) as f64 + 1.0).log2().ceil() as usize;
        let growth = match &self.structure {
            Some(s) => {
                let w = match s.weight {
                    Weight::One => 0,
                    Weight::Power(p) => p.max(0) as usize,
                    Weight::HalfShift(k) => 2 * k as usize,
                };
                let neg = s.rhs.iter().map(|t| (-t.power).max(0) as usize).max().unwrap_or(0);
                2 * s.stencil.order() + w + neg
            }
            None => 2 * self.a.bandwidth() + 4,
        };
        let bits = 128 + 34 + lg * growth;
        bits.div_ceil(64) * 64
    }
}

fn weight_at<T: Arith>(w: Weight, n: i64, ctx: T::Ctx) -> T {
    let nf = T::from_f64(n as f64, ctx);
    match w {
        Weight::One => T::from_f64(1.0, ctx),
        Weight::Power(p) if p >= 0 => nf.powi(p as u32, ctx),
        Weight::Power(p) => T::from_f64(1.0, ctx).div(&nf.powi(p.unsigned_abs(), ctx), ctx),
        Weight::HalfShift(k) => {
            let odd = T::from_f64((2 * n - 1) as f64, ctx);
            odd.powi(2 * k, ctx).div(&T::from_f64(4.0, ctx).powi(k, ctx), ctx)
        }
    }
}

/// `A = SᵀWS` and `B = Σ c·n^p` on `[first, last]`, in the arithmetic `T`.
fn assemble_in<T: Arith>(s: &PencilStructure, first: i64, last: i64, ctx: T::Ctx) -> (Band<T>, Vec<T>) {
    let dim = (last - first + 1) as usize;
    let width = s.stencil.coeffs.len() as i64;
    let mut a = Band::zeros(dim, s.stencil.bandwidth(), ctx);
    let coeffs: Vec<T> = s.stencil.coeffs.iter().map(|&c| T::from_f64(c as f64, ctx)).collect();
    // (Su)(n) reads u(n + offset + t), t = 0..width
    for n in (first - s.stencil.offset - (width - 1))..=(last - s.stencil.offset) {
        let w = weight_at::<T>(s.weight, n, ctx);
        let touched: Vec<(usize, usize)> = (0..width)
            .filter_map(|t| {
                let j = n + s.stencil.offset + t;
                (j >= first && j <= last).then(|| ((j - first) as usize, t as usize))
            })
            .collect();
        for &(i, ti) in &touched {
            let wi = w.mul(&coeffs[ti], ctx);
            for &(j, tj) in &touched {
                if j <= i {
                    let e: &mut T = a.lower_mut(i, j);
                    *e = e.add(&wi.mul(&coeffs[tj], ctx), ctx);
                }
            }
        }
    }
    let b = (first..=last)
        .map(|n| {
            s.rhs.iter().fold(T::zero(ctx), |acc, term| {
                let c = T::from_rational(&term.coefficient, ctx);
                acc.add(&c.mul(&weight_at::<T>(Weight::Power(term.power), n, ctx), ctx), ctx)
            })
        })
        .collect();
    (a, b)
}

/// First trial index: one past the last forced zero, and at least 1.
pub fn trial_start(id: InequalityId) -> i64 {
    (id.requirement().zero_prefix as i64).max(1)
}

/// Pencil of `id` on the trial window `[z, n_max]`, `z` from [`trial_start`].
///
/// Single-term inequalities get `B = n^p` without the constant, so the
/// smallest eigenvalue estimates the best constant; improved ones get the
/// full right-hand weight and a floor of 1.
pub fn assemble(id: InequalityId, n_max: i64) -> Result<Pencil> {
    let st = id.statement()?;
    let first = trial_start(id);
    if n_max < first {
        return Err(Error::ParameterRange(format!("{id}: N = {n_max} leaves no unknowns (first index {first})")));
    }
    let q = st.lhs.quad_form();
    let rhs = if st.rhs.len() == 1 {
        vec![RhsTerm { coefficient: Rational::from_integer(1.into()), ..st.rhs[0].clone() }]
    } else {
        st.rhs
    };
    let structure = PencilStructure { id, stencil: q.stencil, weight: q.weight, rhs };
    let (band, b_diag) = assemble_in::<f64>(&structure, first, n_max, ());
    Ok(Pencil { a: BandedSymMatrix { band }, b_diag, first, structure: Some(structure) })
}

/// The constant the inequality guarantees as a lower bound for `λ_min` of
/// its pencil.
pub fn proven_floor(id: InequalityId) -> Result<f64> {
    let st = id.statement()?;
    Ok(if st.rhs.len() == 1 { rational_to_f64(&st.rhs[0].coefficient) } else { 1.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigBracket {
    /// Midpoint of the final bracket.
    pub lambda: f64,
    /// `A − lo·B` has no negative pivot.
    pub lo: f64,
    /// `A − hi·B` has at least one.
    pub hi: f64,
    pub precision_bits: usize,
    pub steps: usize,
}

struct Counter<T: Arith> {
    a: Band<T>,
    b: Vec<T>,
    ctx: T::Ctx,
}

impl<T: Arith> Counter<T> {
    /// True when `λ` lies above the smallest eigenvalue; breakdowns are
    /// resolved by nudging `λ` by `nudge`.
    fn above_min(&self, lambda: f64, nudge: f64) -> Result<bool> {
        let mut x = lambda;
        for attempt in 0..8 {
            match inertia(&self.a, &self.b, x, self.ctx, true) {
                Inertia::Negative(c) => return Ok(c > 0),
                Inertia::Breakdown => x = lambda + nudge * if attempt % 2 == 0 { 1.0 } else { -1.0 } * (attempt + 1) as f64,
            }
        }
        Err(Error::Numerical(format!("factorization keeps breaking down near lambda = {lambda}")))
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, tol: f64, steps: &mut usize) -> Result<(f64, f64)> {
        while hi - lo > 2.0 * tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            *steps += 1;
            if self.above_min(mid, tol / 8.0)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((lo, hi))
    }
}

fn upper_bound(a: &Band<f64>, b: &[f64]) -> f64 {
    let bw = a.bandwidth;
    let mut gersh = vec![0.0f64; a.dim];
    let mut rayleigh = f64::INFINITY;
    for i in 0..a.dim {
        rayleigh = rayleigh.min(a.lower(i, i) / b[i]);
        for j in i.saturating_sub(bw)..=i {
            let v = a.lower(i, j).abs() / (b[i] * b[j]).sqrt();
            gersh[i] += v;
            if j != i {
                gersh[j] += v;
            }
        }
    }
    let g = gersh.into_iter().fold(0.0, f64::max);
    g.min(rayleigh)
}

/// Smallest eigenvalue of `Au = λBu` bracketed to width `2·tol`.
///
/// A double-precision pass narrows the bracket; the result is then
/// re-certified and refined with multiprecision inertia counts.
pub fn min_eig_bracket(p: &Pencil, tol: f64) -> Result<EigBracket> {
    if !(tol > 0.0) {
        return Err(Error::ParameterRange(format!("tol must be positive, got {tol}")));
    }
    let hi0 = upper_bound(p.a.band(), &p.b_diag);
    let bits = p.precision_bits();
    let ctx = Bits(bits);
    let (a, b) = match &p.structure {
        Some(s) => assemble_in::<BigFloat>(s, p.first, p.last(), ctx),
        None => (
            Band {
                dim: p.dim(),
                bandwidth: p.a.bandwidth(),
                data: p.a.band().data.iter().map(|&x| <BigFloat as Arith>::from_f64(x, ctx)).collect(),
            },
            p.b_diag.iter().map(|&x| <BigFloat as Arith>::from_f64(x, ctx)).collect(),
        ),
    };
    let exact = Counter { a, b, ctx };
    let mut steps = 0;

    let lo0 = 0.0;
    let mut hi = hi0 * (1.0 + 1e-9) + tol;
    let mut grow = 0;
    while !exact.above_min(hi, tol / 8.0)? {
        hi *= 2.0;
        grow += 1;
        if grow > 64 {
            return Err(Error::Numerical("could not bracket the smallest eigenvalue".into()));
        }
    }
    if exact.above_min(lo0, tol / 8.0)? {
        return Err(Error::Numerical("A is not positive semidefinite on the window".into()));
    }

    let fast = Counter { a: p.a.band().clone(), b: p.b_diag.clone(), ctx: () };
    let mut fast_steps = 0;
    let guess = match fast.bisect(lo0, hi, (hi * 1e-12).max(tol), &mut fast_steps) {
        Ok((l, h)) => 0.5 * (l + h),
        Err(_) => 0.5 * hi,
    };

    // certify a small bracket around the guess, widening until it holds
    let mut delta = (guess.abs() * 1e-9).max(16.0 * tol);
    let (mut lo, mut hi_c) = (lo0, hi);
    loop {
        let l = (guess - delta).max(lo0);
        let h = (guess + delta).min(hi);
        if l <= lo0 && h >= hi {
            break;
        }
        steps += 2;
        if !exact.above_min(l, tol / 8.0)? && exact.above_min(h, tol / 8.0)? {
            lo = l;
            hi_c = h;
            break;
        }
        delta *= 64.0;
    }
    let (lo, hi) = exact.bisect(lo, hi_c, tol, &mut steps)?;
    Ok(EigBracket { lambda: 0.5 * (lo + hi), lo, hi, precision_bits: bits, steps })
}

pub fn min_eig(p: &Pencil, tol: f64) -> Result<f64> {
    Ok(min_eig_bracket(p, tol)?.lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: i64,
    pub lambda_min: f64,
    pub lo: f64,
    pub hi: f64,
    pub paper_constant: f64,
    /// `lambda_min − paper_constant`.
    pub gap: f64,
}

/// `λ_min(N)` for each `N`, cells computed in parallel.
pub fn sweep(id: InequalityId, ns: &[i64], tol: f64) -> Result<Vec<SweepRow>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ParameterRange("N list must be strictly increasing".into()));
    }
    let floor = proven_floor(id)?;
    ns.par_iter()
        .map(|&n| {
            let e = min_eig_bracket(&assemble(id, n)?, tol)?;
            Ok(SweepRow { n, lambda_min: e.lambda, lo: e.lo, hi: e.hi, paper_constant: floor, gap: e.lambda - floor })
        })
        .collect()
}

/// Least-squares fit `λ(N) ≈ c₀ + c₁/ln N`. `c₀` is an extrapolated estimate,
/// not a certified limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub estimate: f64,
    pub slope: f64,
    pub label: String,
}

pub fn extrapolate(rows: &[SweepRow]) -> Option<LogFit> {
    if rows.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = rows.iter().map(|r| 1.0 / (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.lambda_min).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(LogFit { estimate: my - slope * mx, slope, label: "estimate".into() })
}
