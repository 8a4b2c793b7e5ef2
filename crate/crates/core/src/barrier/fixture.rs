//! Dense bivariate polynomials and the worked cubic used to illustrate the
//! `(1 − ∂_y)` step.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_point, BarrierPolynomial};
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;
use crate::realpoly::{RealPolynomial, RootFinder};

/// `Σ c[i][j] x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BivariatePolynomial {
    coeffs: Vec<Vec<f64>>,
}

impl BivariatePolynomial {
    /// `coeffs[i][j]` multiplies `x^i y^j`; rows may have different lengths.
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        Self { coeffs }
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn eval_at(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |a, &c| a * y + c))
    }

    pub fn partial_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|c| c * i as f64).collect())
                .collect(),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect())
                .collect(),
        )
    }

    /// Coefficientwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        let rows = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..rows)
                .map(|i| {
                    let cols = self
                        .coeffs
                        .get(i)
                        .map_or(0, Vec::len)
                        .max(other.coeffs.get(i).map_or(0, Vec::len));
                    (0..cols).map(|j| self.coeff(i, j) - other.coeff(i, j)).collect()
                })
                .collect(),
        )
    }

    /// Restriction `t ↦ p(x₀ + t a, y₀ + t b)`.
    pub fn restrict_to_line(&self, base: [f64; 2], dir: [f64; 2]) -> RealPolynomial {
        let lx = RealPolynomial::new(vec![base[0], dir[0]]);
        let ly = RealPolynomial::new(vec![base[1], dir[1]]);
        let mut px = RealPolynomial::constant(1.0);
        let mut total = RealPolynomial::zero();
        for row in &self.coeffs {
            let mut py = px.clone();
            for &c in row {
                total = &total + &py.scaled(c);
                py = &py * &ly;
            }
            px = &px * &lx;
        }
        total
    }

    /// Sampled real-stability test: a real polynomial in two variables is
    /// real stable exactly when its restriction to every line with real base
    /// point and positive direction is real-rooted. Checks `samples` random
    /// such lines.
    pub fn stability_probe(&self, samples: usize, seed: u64, policy: &NumericPolicy) -> bool {
        let finder = RootFinder::from_policy(policy);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let base = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
            let dir = [rng.random_range(0.01..1.0), rng.random_range(0.01..1.0)];
            let line = self.restrict_to_line(base, dir);
            line.degree() == 0 || finder.is_real_rooted(&line).real_rooted
        })
    }
}

impl BarrierPolynomial for BivariatePolynomial {
    fn nvars(&self) -> usize {
        2
    }

    fn eval(&self, z: &[f64]) -> Result<f64> {
        check_point(self, z, None)?;
        Ok(self.eval_at(z[0], z[1]))
    }

    fn eval_scaled(&self, z: &[f64]) -> Result<(f64, f64)> {
        check_point(self, z, None)?;
        let (x, y) = (z[0].abs(), z[1].abs());
        let scale = self.coeffs.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |a, &c| a * y + c.abs())
        });
        Ok((self.eval_at(z[0], z[1]), scale))
    }

    fn partial(&self, z: &[f64], i: usize) -> Result<f64> {
        check_point(self, z, Some(i))?;
        let d = if i == 0 { self.partial_x() } else { self.partial_y() };
        Ok(d.eval_at(z[0], z[1]))
    }

    fn one_minus_partial(&self, i: usize) -> Result<Self> {
        match i {
            0 => Ok(self.sub(&self.partial_x())),
            1 => Ok(self.sub(&self.partial_y())),
            _ => Err(Error::IndexOutOfRange(format!("direction {i} of 2"))),
        }
    }
}

/// The cubic `p(x, y) = 4 + 12x + 8x² + 17y + 29xy + 8x²y + 14y² + 13xy² + y³`
/// and `q = (1 − ∂_y) p`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BivariateFixture {
    pub p: BivariatePolynomial,
    pub q: BivariatePolynomial,
}

impl BivariateFixture {
    pub fn new() -> Self {
        let p = BivariatePolynomial::new(vec![vec![4.0, 17.0, 14.0, 1.0], vec![12.0, 29.0, 13.0], vec![8.0, 8.0]]);
        let q = p.sub(&p.partial_y());
        Self { p, q }
    }
}

impl Default for BivariateFixture {
    fn default() -> Self {
        Self::new()
    }
}
