//! `P_S(y) = Π_{i∈S} (1 − ∂_{y_i}) det(Σ_j y_j A_j)` evaluated pointwise.
//!
//! With rank-one `A_j` the determinant is affine in each `y_j`, so
//! `∂_i f(y) = f(y + e_i) − f(y)` exactly and
//! `P_S(y) = Σ_{T⊆S} 2^{|S|−|T|} (−1)^{|T|} P(y + e_T)`.

use alloc::format;
use alloc::vec::Vec;

use super::{check_point, fd_partial, BarrierPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{det, jacobi_directional, ComplexMatrix};
use crate::math::{powi, sqrt};
use crate::mixedchar::MixedInstance;
use crate::par;
use crate::policy::NumericPolicy;

const SUBSET_CHUNK: usize = 64;

#[derive(Debug, Clone)]
pub struct MultivariateEvaluator {
    dim: usize,
    matrices: Vec<ComplexMatrix>,
    applied: Vec<usize>,
    rank_one: bool,
    policy: NumericPolicy,
}

impl MultivariateEvaluator {
    /// The evaluator of `det(Σ y_i A_i)` with no operators applied.
    pub fn new(inst: &MixedInstance, policy: &NumericPolicy) -> Self {
        Self {
            dim: inst.dim(),
            matrices: inst.matrices().iter().map(|a| a.matrix().clone()).collect(),
            applied: Vec::new(),
            rank_one: inst.matrices().iter().all(|a| a.rank(policy) <= 1),
            policy: policy.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Indices `i` for which `(1 − ∂_{y_i})` has been applied, in order.
    pub fn applied(&self) -> &[usize] {
        &self.applied
    }

    pub fn is_rank_one(&self) -> bool {
        self.rank_one
    }

    /// Applies `(1 − ∂_{y_i})`. Needs rank-one matrices, an index not yet
    /// applied, and at most `max_operators` operators in total.
    pub fn with_operator(&self, i: usize) -> Result<Self> {
        if !self.rank_one {
            return Err(Error::Capability(
                "(1 − ∂) operators need rank-one matrices; differences are inexact otherwise".into(),
            ));
        }
        if i >= self.matrices.len() {
            return Err(Error::IndexOutOfRange(format!(
                "variable {i} of {}",
                self.matrices.len()
            )));
        }
        if self.applied.contains(&i) {
            return Err(Error::InvalidParameter(format!("operator {i} already applied")));
        }
        if self.applied.len() + 1 > self.policy.max_operators {
            return Err(Error::Capacity {
                what: "barrier operators",
                needed: self.applied.len() as u64 + 1,
                cap: self.policy.max_operators as u64,
            });
        }
        let mut next = self.clone();
        next.applied.push(i);
        Ok(next)
    }

    fn pencil(&self, y: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (a, &w) in self.matrices.iter().zip(y) {
            m.add_scaled_assign(a, w);
        }
        m
    }

    /// `det` of `m` and the Hadamard bound `Π ‖row‖`.
    fn det_and_scale(m: &ComplexMatrix) -> Result<(f64, f64)> {
        let n = m.rows();
        let scale = (0..n)
            .map(|r| sqrt((0..n).map(|c| m[(r, c)].norm_sqr()).sum()))
            .product();
        Ok((det(m)?.re, scale))
    }

    fn eval_both(&self, y: &[f64]) -> Result<(f64, f64)> {
        let base = self.pencil(y);
        let k = self.applied.len();
        let parts = par::map_chunks(1usize << k, SUBSET_CHUNK, |range| {
            let (mut value, mut scale) = (0.0, 0.0);
            for t in range {
                let mut m = base.clone();
                for (bit, &i) in self.applied.iter().enumerate() {
                    if t >> bit & 1 == 1 {
                        m.add_scaled_assign(&self.matrices[i], 1.0);
                    }
                }
                let size = t.count_ones() as i32;
                let weight = powi(2.0, k as i32 - size);
                let sign = if size % 2 == 0 { 1.0 } else { -1.0 };
                let (d, s) = Self::det_and_scale(&m)?;
                value += sign * weight * d;
                scale += weight * s;
            }
            Ok::<_, Error>((value, scale))
        });
        parts.into_iter().try_fold((0.0, 0.0), |(v, s), part| {
            let (pv, ps) = part?;
            Ok((v + pv, s + ps))
        })
    }
}

impl BarrierPolynomial for MultivariateEvaluator {
    fn nvars(&self) -> usize {
        self.matrices.len()
    }

    fn eval(&self, z: &[f64]) -> Result<f64> {
        Ok(self.eval_scaled(z)?.0)
    }

    fn eval_scaled(&self, z: &[f64]) -> Result<(f64, f64)> {
        check_point(self, z, None)?;
        self.eval_both(z)
    }

    /// Exact difference for rank-one matrices; otherwise Jacobi's formula
    /// (falling back to finite differences at singular points).
    fn partial(&self, z: &[f64], i: usize) -> Result<f64> {
        check_point(self, z, Some(i))?;
        if self.rank_one {
            let mut shifted = z.to_vec();
            shifted[i] += 1.0;
            return Ok(self.eval_both(&shifted)?.0 - self.eval_both(z)?.0);
        }
        match jacobi_directional(&self.pencil(z), &self.matrices[i], &self.policy) {
            Ok(d) => Ok(d.re),
            Err(Error::Singular { .. }) => fd_partial(self, z, i, &self.policy),
            Err(e) => Err(e),
        }
    }

    /// `Σ z_i A_i ≻ 0` puts `z` above the roots of `det(Σ y_i A_i)`.
    fn certify_above(&self, z: &[f64]) -> Option<bool> {
        if !self.applied.is_empty() || z.len() != self.matrices.len() {
            return None;
        }
        let m = crate::linalg::HermitianMatrix::symmetrized(self.pencil(z));
        let ev = m.eigenvalues();
        let max = ev.last().copied().unwrap_or(0.0);
        let min = ev.first().copied().unwrap_or(0.0);
        (min > self.policy.psd_tol * max.abs().max(1.0)).then_some(true)
    }

    fn one_minus_partial(&self, i: usize) -> Result<Self> {
        self.with_operator(i)
    }
}
