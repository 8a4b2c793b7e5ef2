//! Univariate real polynomials: arithmetic, the `(1 − c·d/dx)` operator,
//! real-rootedness, root finding and interlacing tests.

mod interlacing;
mod laguerre;
mod roots;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use interlacing::{
    common_interlacing_test, has_common_interlacing, hko_test, interlaces, separate_check, SeparateReport,
};
pub use laguerre::{laguerre_expected, laguerre_expected_roots};
pub use roots::{is_real_rooted, largest_root, roots, RealRootedness, RootFinder, RootList};

/// A polynomial with real coefficients stored in ascending degree order.
/// Trailing zero coefficients are trimmed, so the last stored coefficient is
/// nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Panics on non-finite coefficients; use [`RealPolynomial::try_new`] for
    /// untrusted input.
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self::try_new(coeffs).expect("polynomial coefficients must be finite")
    }

    pub fn try_new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial"));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c }
    }

    /// `∏ (x − r)` over the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= r * a;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value together with the Horner magnitude bound `Σ |c_j| |x|^j`.
    pub fn eval_with_bound(&self, x: f64) -> (f64, f64) {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold((0.0, 0.0), |(v, b), &c| (v * x + c, b * ax + c.abs()))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading() {
            0.0 => self.clone(),
            lead => self.scaled(1.0 / lead),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()))
    }

    /// Largest coefficient difference relative to the larger coefficient
    /// magnitude of the two polynomials.
    pub fn max_rel_deviation(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).abs())
            .fold(0.0f64, f64::max)
            / scale
    }

    /// `p − c·p′`. For nonconstant `p` and any real `c` the degree is kept and
    /// real-rootedness is preserved.
    pub fn one_minus_c_derivative(&self, c: f64) -> Self {
        self - &self.derivative().scaled(c)
    }
}

impl Add for &RealPolynomial {
    type Output = RealPolynomial;
    fn add(self, rhs: &RealPolynomial) -> RealPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RealPolynomial {
    type Output = RealPolynomial;
    fn sub(self, rhs: &RealPolynomial) -> RealPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RealPolynomial {
    type Output = RealPolynomial;
    fn mul(self, rhs: &RealPolynomial) -> RealPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RealPolynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RealPolynomial::new(c)
    }
}

impl Neg for &RealPolynomial {
    type Output = RealPolynomial;
    fn neg(self) -> RealPolynomial {
        self.scaled(-1.0)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RealPolynomial {
            type Output = RealPolynomial;
            fn $m(self, rhs: RealPolynomial) -> RealPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl core::iter::Sum for RealPolynomial {
    fn sum<I: Iterator<Item = RealPolynomial>>(iter: I) -> Self {
        iter.fold(RealPolynomial::zero(), |acc, p| &acc + &p)
    }
}
