//! Replays the barrier induction that bounds the largest root of
//! `μ(A_1, …, A_m)` by `(1 + √ε)²` when `Σ A_i = I` and `tr A_i ≤ ε`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{above_roots_probe, barrier_values, AboveEvidence, BarrierPolynomial, MultivariateEvaluator, Probe};
use crate::error::{Error, Result};
use crate::linalg::distance_to_identity;
use crate::math::sqrt;
use crate::mixedchar::{mixed_char_poly, MixedInstance};
use crate::policy::NumericPolicy;
use crate::realpoly::RootFinder;

/// `(1 + √ε)²`.
pub fn ks_bound(epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ε = {epsilon} must be finite and nonnegative"
        )));
    }
    let s = 1.0 + sqrt(epsilon);
    Ok(s * s)
}

/// State after `k` operators have been applied.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertificateStep {
    pub k: usize,
    /// `x^k`: `t + δ` in the first `k` coordinates, `t` elsewhere.
    pub point: Vec<f64>,
    /// `P_k(x^k)`.
    pub value: f64,
    /// `Φ^i_{P_k}(x^k)` for every `i`.
    pub barriers: Vec<f64>,
    pub above: AboveEvidence,
    /// Every barrier is at most `φ` (within `barrier_tol`).
    pub within_phi: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BarrierCertificate {
    pub epsilon: f64,
    pub t: f64,
    pub phi: f64,
    pub delta: f64,
    pub steps: Vec<CertificateStep>,
    /// `t + δ = (1 + √ε)²`.
    pub bound: f64,
    /// Largest root of the mixed characteristic polynomial, for comparison.
    pub mixed_root: f64,
    pub valid: bool,
}

/// Builds the certificate for `inst`. `epsilon` defaults to `max tr A_i` and
/// may not be smaller. Needs `‖Σ A_i − I‖ ≤ identity_tol`, rank-one
/// matrices and at most `max_operators` of them. A failed check is recorded
/// in its step and clears `valid`.
pub fn build_certificate(
    inst: &MixedInstance,
    epsilon: Option<f64>,
    probe: &Probe,
    policy: &NumericPolicy,
) -> Result<BarrierCertificate> {
    let deviation = distance_to_identity(&inst.sum());
    if !(deviation <= policy.identity_tol) {
        return Err(Error::InvalidInstance(format!(
            "matrices must sum to the identity (deviation {deviation:e})"
        )));
    }
    let m = inst.len();
    if m > policy.max_operators {
        return Err(Error::Capacity {
            what: "barrier operators",
            needed: m as u64,
            cap: policy.max_operators as u64,
        });
    }
    let max_trace = inst.max_trace();
    let epsilon = match epsilon {
        None => max_trace,
        Some(e) if e >= max_trace - policy.barrier_tol * max_trace.max(1.0) && e.is_finite() => e,
        Some(e) => {
            return Err(Error::InvalidParameter(format!(
                "ε = {e} is below the largest trace {max_trace}"
            )))
        }
    };
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("ε must be positive".into()));
    }
    let mut p = MultivariateEvaluator::new(inst, policy);
    if !p.is_rank_one() {
        return Err(Error::Capability("certificates need rank-one matrices".into()));
    }
    let root_eps = sqrt(epsilon);
    let t = root_eps + epsilon;
    let phi = epsilon / (epsilon + root_eps);
    let delta = 1.0 + root_eps;
    let bound = t + delta;
    let mut point = vec![t; m];
    let mut steps = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k > 0 {
            p = p.with_operator(k - 1)?;
            point[k - 1] += delta;
        }
        steps.push(record_step(&p, k, &point, phi, probe, policy)?);
    }
    let finder = RootFinder::from_policy(policy);
    let mixed_root = finder.largest_root(&mixed_char_poly(inst, policy)?)?;
    let valid = steps.iter().all(|s| s.within_phi && s.value > 0.0 && s.above.above);
    Ok(BarrierCertificate {
        epsilon,
        t,
        phi,
        delta,
        steps,
        bound,
        mixed_root,
        valid,
    })
}

fn record_step(
    p: &MultivariateEvaluator,
    k: usize,
    point: &[f64],
    phi: f64,
    probe: &Probe,
    policy: &NumericPolicy,
) -> Result<CertificateStep> {
    let value = p.eval(point)?;
    let above = above_roots_probe(p, point, probe)?;
    let barriers = match barrier_values(p, point, policy) {
        Ok(b) => b,
        Err(Error::Pole { .. }) => vec![f64::INFINITY; p.nvars()],
        Err(e) => return Err(e),
    };
    let within_phi = barriers.iter().all(|&b| b <= phi + policy.barrier_tol * phi.max(1.0));
    Ok(CertificateStep {
        k,
        point: point.to_vec(),
        value,
        barriers,
        above,
        within_phi,
    })
}
