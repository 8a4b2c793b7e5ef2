//! Dense complex linear algebra: determinants, characteristic polynomials,
//! norms, and the two determinant identities (matrix determinant lemma and
//! Jacobi's formula) used throughout the interlacing argument.

mod eigen;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::math::{powi, sqrt};
use crate::policy::NumericPolicy;
use crate::realpoly::RealPolynomial;

pub use eigen::{hermitian_eigen, HermitianEigen};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![ZERO; dim])
    }

    /// The standard basis vector `e_i` of length `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = ONE;
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    /// `self* other`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    /// The rank-one matrix `self · other*`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        let (r, c) = (self.dim(), other.dim());
        let mut data = Vec::with_capacity(r * c);
        for a in &self.0 {
            for b in &other.0 {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix { rows: r, cols: c, data }
    }

    /// The Hermitian PSD matrix `self · self*`.
    pub fn outer_self(&self) -> HermitianMatrix {
        HermitianMatrix(self.outer(self))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest Euclidean row norm.
    pub fn max_row_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                sqrt(
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .map(|z| z.norm_sqr())
                        .sum(),
                )
            })
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self += s · other`, shapes assumed equal.
    pub(crate) fn add_scaled_assign(&mut self, other: &Self, s: f64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(ComplexVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)] * v.0[j]).sum::<Complex64>())
                .collect(),
        ))
    }

    /// Solves `self · X = rhs` by partial-pivot LU; `None` if a pivot is exactly zero.
    pub(crate) fn solve_matrix(&self, rhs: &Self) -> Option<Self> {
        let lu = Lu::new(self)?;
        Some(lu.solve(rhs))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve_matrix(&Self::identity(self.rows))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A complex Hermitian matrix. Construction checks `M = M*` and then stores
/// the exact symmetrisation `(M + M*)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix, policy: &NumericPolicy) -> Result<Self> {
        m.require_square()?;
        let n = m.rows;
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        let scale = m.frobenius_norm();
        if deviation > policy.hermitian_tol * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let n = m.rows;
        let sym = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Self(sym)
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn diag(entries: &[f64]) -> Self {
        Self(ComplexMatrix::diag(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.scaled(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.0.add_scaled_assign(&other.0, 1.0);
    }

    /// `self += s · v v*`.
    pub fn add_outer(&mut self, v: &ComplexVector, s: f64) {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                self.0.data[i * n + j] += v.0[i] * v.0[j].conj() * s;
            }
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(self).values
    }

    /// Sum of a list of Hermitian matrices of dimension `dim`.
    pub fn sum<'a>(dim: usize, items: impl IntoIterator<Item = &'a HermitianMatrix>) -> Self {
        let mut acc = Self::zeros(dim);
        for m in items {
            acc.add_assign(m);
        }
        acc
    }

    /// Checks positive semidefiniteness and returns the smallest eigenvalue.
    pub fn check_psd(&self, policy: &NumericPolicy) -> Result<f64> {
        let ev = self.eigenvalues();
        let min = ev.first().copied().unwrap_or(0.0);
        let max_abs = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        if min < -policy.psd_tol * max_abs.max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(min)
    }

    /// Numerical rank: eigenvalues above `rank_tol · max|λ|`.
    pub fn rank(&self, policy: &NumericPolicy) -> usize {
        let ev = self.eigenvalues();
        let max_abs = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        ev.iter()
            .filter(|&&x| x > policy.rank_tol * max_abs.max(f64::MIN_POSITIVE))
            .count()
    }
}

struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    fn new(m: &ComplexMatrix) -> Option<Self> {
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].norm()))
                    .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pivot == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = ONE / lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] * inv;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    fn solve(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let cols = rhs.cols;
        let mut x = ComplexMatrix::zeros(n, cols);
        for c in 0..cols {
            let mut y: Vec<Complex64> = (0..n).map(|i| rhs[(self.perm[i], c)]).collect();
            for i in 0..n {
                for k in 0..i {
                    let l = self.lu[i * n + k];
                    let yk = y[k];
                    y[i] -= l * yk;
                }
            }
            for i in (0..n).rev() {
                for k in (i + 1)..n {
                    let u = self.lu[i * n + k];
                    let yk = y[k];
                    y[i] -= u * yk;
                }
                y[i] /= self.lu[i * n + i];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        x
    }
}

/// Determinant by partial-pivot Gaussian elimination. The empty matrix has
/// determinant one.
pub fn det(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square()?;
    let mut a = m.data.clone();
    let mut acc = ONE;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, a[i * n + k].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pivot == 0.0 {
            return Ok(ZERO);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            acc = -acc;
        }
        let d = a[k * n + k];
        acc *= d;
        let inv = ONE / d;
        for i in (k + 1)..n {
            let f = a[i * n + k] * inv;
            if f == ZERO {
                continue;
            }
            for j in (k + 1)..n {
                let u = a[k * n + j];
                a[i * n + j] -= f * u;
            }
        }
    }
    Ok(acc)
}

/// Faddeev–LeVerrier: `M_1 = I`, `M_k = A M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = −tr(A M_k)/k`. Coefficients ascending.
fn faddeev_leverrier<T>(a: &[T], n: usize) -> Vec<T>
where
    T: Num + Copy + From<f64>,
{
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    if n == 0 {
        return coeffs;
    }
    let trace = |m: &[T]| (0..n).fold(T::zero(), |acc, i| acc + m[i * n + i]);
    let mut am = a.to_vec();
    coeffs[n - 1] = T::zero() - trace(&am);
    let mut mk = vec![T::zero(); n * n];
    for k in 2..=n {
        mk.copy_from_slice(&am);
        let c = coeffs[n - k + 1];
        for i in 0..n {
            mk[i * n + i] = mk[i * n + i] + c;
        }
        for v in am.iter_mut() {
            *v = T::zero();
        }
        for i in 0..n {
            for l in 0..n {
                let x = a[i * n + l];
                if x == T::zero() {
                    continue;
                }
                for j in 0..n {
                    am[i * n + j] = am[i * n + j] + x * mk[l * n + j];
                }
            }
        }
        coeffs[n - k] = (T::zero() - trace(&am)) / T::from(k as f64);
    }
    coeffs
}

/// Characteristic-polynomial coefficients of a matrix assumed Hermitian
/// (imaginary parts of the coefficients are dropped).
pub(crate) fn char_poly_coeffs(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows;
    if m.is_real() {
        let a: Vec<f64> = m.data.iter().map(|z| z.re).collect();
        faddeev_leverrier(&a, n)
    } else {
        faddeev_leverrier(&m.data, n).into_iter().map(|z| z.re).collect()
    }
}

/// `χ_M(x) = det(xI − M)`, monic of degree `dim`.
pub fn char_poly(m: &HermitianMatrix) -> RealPolynomial {
    RealPolynomial::new(char_poly_coeffs(&m.0))
}

fn singularity_threshold(a: &ComplexMatrix, policy: &NumericPolicy) -> f64 {
    policy.singular_tol * powi(a.max_row_norm(), a.rows as i32)
}

fn checked_det(a: &ComplexMatrix, policy: &NumericPolicy) -> Result<Complex64> {
    let d = det(a)?;
    let threshold = singularity_threshold(a, policy);
    if d.norm() < threshold || d.norm() == 0.0 {
        return Err(Error::Singular {
            det: d.norm(),
            threshold,
        });
    }
    Ok(d)
}

/// Matrix determinant lemma: `det(A + u v*) = det(A) (1 + v* A⁻¹ u)`.
pub fn rank1_update_det(
    a: &ComplexMatrix,
    u: &ComplexVector,
    v: &ComplexVector,
    policy: &NumericPolicy,
) -> Result<Complex64> {
    let n = a.require_square()?;
    for w in [u, v] {
        if w.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.dim(),
            });
        }
    }
    let d = checked_det(a, policy)?;
    let rhs = ComplexMatrix {
        rows: n,
        cols: 1,
        data: u.0.clone(),
    };
    let x = a.solve_matrix(&rhs).ok_or(Error::Singular {
        det: 0.0,
        threshold: singularity_threshold(a, policy),
    })?;
    let y = ComplexVector(x.data);
    Ok(d * (ONE + v.inner(&y)))
}

/// Jacobi's formula: `∂_t det(A + tB)|_{t=0} = det(A) tr(A⁻¹ B)`.
pub fn jacobi_directional(a: &ComplexMatrix, b: &ComplexMatrix, policy: &NumericPolicy) -> Result<Complex64> {
    let n = a.require_square()?;
    if b.rows != n || b.cols != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows.max(b.cols),
        });
    }
    let d = checked_det(a, policy)?;
    let x = a.solve_matrix(b).ok_or(Error::Singular {
        det: 0.0,
        threshold: singularity_threshold(a, policy),
    })?;
    Ok(d * x.trace())
}

/// Largest eigenvalue of a PSD matrix. Indefinite input is rejected.
pub fn operator_norm(m: &HermitianMatrix, policy: &NumericPolicy) -> Result<f64> {
    let ev = m.eigenvalues();
    let max = ev.last().copied().unwrap_or(0.0);
    let min = ev.first().copied().unwrap_or(0.0);
    if min < -policy.psd_tol * max.abs().max(1.0) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(max.max(0.0))
}

/// `V^{−1/2}` for a positive definite `V`.
pub fn isotropic_normalizer(v: &HermitianMatrix, policy: &NumericPolicy) -> Result<HermitianMatrix> {
    let eig = hermitian_eigen(v);
    let max = eig.values.last().copied().unwrap_or(0.0);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if v.dim() == 0 {
        return Ok(HermitianMatrix::zeros(0));
    }
    if min <= policy.rank_tol * max.abs() || min <= 0.0 {
        return Err(Error::RankDeficient { min_eigenvalue: min });
    }
    Ok(eig.apply(|x| 1.0 / sqrt(x)))
}

/// Operator-norm distance `‖M − I‖` for Hermitian `M`.
pub fn distance_to_identity(m: &HermitianMatrix) -> f64 {
    let ev = m.eigenvalues();
    ev.iter().fold(0.0f64, |a, &x| a.max((x - 1.0).abs()))
}
