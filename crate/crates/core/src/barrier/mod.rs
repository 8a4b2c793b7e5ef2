//! The multivariate barrier argument.
//!
//! For a polynomial `p` that is positive above its roots, the barrier in
//! direction `i` is `Φ^i_p(z) = ∂_i p(z) / p(z)`. Applying `(1 − ∂_i)` and
//! moving the point by `δ e_i` keeps every barrier from growing as long as
//! `Φ^i ≤ 1 − 1/δ`; repeating this for every variable of
//! `det(Σ y_i A_i)` bounds the largest root of the mixed characteristic
//! polynomial. This module evaluates barriers, checks each lemma numerically
//! and replays the whole induction as a [`BarrierCertificate`].

mod certificate;
mod evaluator;
mod fixture;

pub use certificate::{build_certificate, ks_bound, BarrierCertificate, CertificateStep};
pub use evaluator::MultivariateEvaluator;
pub use fixture::{BivariateFixture, BivariatePolynomial};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::par;
use crate::policy::NumericPolicy;
use crate::realpoly::RealPolynomial;

/// A real polynomial in `nvars` variables that can be evaluated and
/// differentiated at a point.
pub trait BarrierPolynomial: Sync {
    fn nvars(&self) -> usize;

    fn eval(&self, z: &[f64]) -> Result<f64>;

    /// `p(z)` together with the magnitude against which it is judged to
    /// vanish (for example the sum of absolute values of its terms).
    fn eval_scaled(&self, z: &[f64]) -> Result<(f64, f64)> {
        Ok((self.eval(z)?, 1.0))
    }

    /// `∂_{z_i} p(z)`.
    fn partial(&self, z: &[f64], i: usize) -> Result<f64>;

    /// An exact sufficient test that `z` is above the roots, where one is
    /// known. `None` means "no certificate", not "below".
    fn certify_above(&self, _z: &[f64]) -> Option<bool> {
        None
    }

    /// `p − ∂_{z_i} p`.
    fn one_minus_partial(&self, i: usize) -> Result<Self>
    where
        Self: Sized;
}

pub(crate) fn check_point<P: BarrierPolynomial + ?Sized>(p: &P, z: &[f64], i: Option<usize>) -> Result<()> {
    if z.len() != p.nvars() {
        return Err(Error::DimensionMismatch {
            expected: p.nvars(),
            found: z.len(),
        });
    }
    if z.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("evaluation point"));
    }
    if let Some(i) = i {
        if i >= p.nvars() {
            return Err(Error::IndexOutOfRange(format!("direction {i} of {}", p.nvars())));
        }
    }
    Ok(())
}

impl BarrierPolynomial for RealPolynomial {
    fn nvars(&self) -> usize {
        1
    }

    fn eval(&self, z: &[f64]) -> Result<f64> {
        check_point(self, z, None)?;
        Ok(RealPolynomial::eval(self, z[0]))
    }

    fn eval_scaled(&self, z: &[f64]) -> Result<(f64, f64)> {
        check_point(self, z, None)?;
        Ok(self.eval_with_bound(z[0]))
    }

    fn partial(&self, z: &[f64], i: usize) -> Result<f64> {
        check_point(self, z, Some(i))?;
        Ok(self.derivative().eval(z[0]))
    }

    fn one_minus_partial(&self, i: usize) -> Result<Self> {
        if i != 0 {
            return Err(Error::IndexOutOfRange(format!("direction {i} of 1")));
        }
        Ok(self.one_minus_c_derivative(1.0))
    }
}

/// Central difference with one Richardson step,
/// `h = fd_step · (1 + |z_i|)`.
pub fn fd_partial<P: BarrierPolynomial + ?Sized>(p: &P, z: &[f64], i: usize, policy: &NumericPolicy) -> Result<f64> {
    check_point(p, z, Some(i))?;
    let h = policy.fd_step * (1.0 + z[i].abs());
    let central = |h: f64| -> Result<f64> {
        let mut plus = z.to_vec();
        let mut minus = z.to_vec();
        plus[i] += h;
        minus[i] -= h;
        Ok((p.eval(&plus)? - p.eval(&minus)?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `Φ^i_p(z) = ∂_i p(z) / p(z)`; fails with [`Error::Pole`] when `p(z)` is
/// numerically zero.
pub fn barrier_value<P: BarrierPolynomial + ?Sized>(p: &P, z: &[f64], i: usize, policy: &NumericPolicy) -> Result<f64> {
    check_point(p, z, Some(i))?;
    let (v, scale) = p.eval_scaled(z)?;
    if !(v.abs() > policy.pole_tol * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Pole { value: v });
    }
    Ok(p.partial(z, i)? / v)
}

/// Barrier values in every direction.
pub fn barrier_values<P: BarrierPolynomial + ?Sized>(p: &P, z: &[f64], policy: &NumericPolicy) -> Result<Vec<f64>> {
    (0..p.nvars()).map(|i| barrier_value(p, z, i, policy)).collect()
}

/// Ray-probe configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Probe {
    /// Random nonnegative directions, in addition to the coordinate axes.
    pub rays: usize,
    /// Largest distance probed along a ray.
    pub reach: f64,
    /// Grid points per ray; spacing is quadratic so the grid is densest near `z`.
    pub grid: usize,
    pub seed: u64,
}

impl Default for Probe {
    fn default() -> Self {
        Self {
            rays: 16,
            reach: 100.0,
            grid: 24,
            seed: 0,
        }
    }
}

/// Outcome of an above-the-roots probe. Only `certified` is a proof; `above`
/// without `certified` is sampled evidence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AboveEvidence {
    pub above: bool,
    /// An exact sufficient condition held.
    pub certified: bool,
    /// A probed point where `p ≤ 0`.
    pub witness: Option<Vec<f64>>,
    pub points_checked: usize,
}

/// Probes whether `z` is above the roots of `p`: `p` must stay positive at
/// `z` and along the coordinate axes and `probe.rays` random nonnegative
/// directions out to `probe.reach`.
pub fn above_roots_probe<P: BarrierPolynomial + ?Sized>(p: &P, z: &[f64], probe: &Probe) -> Result<AboveEvidence> {
    check_point(p, z, None)?;
    let n = p.nvars();
    let certified = p.certify_above(z) == Some(true);
    if !(p.eval(z)? > 0.0) {
        return Ok(AboveEvidence {
            above: false,
            certified,
            witness: Some(z.to_vec()),
            points_checked: 1,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(probe.seed);
    let mut directions: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    for _ in 0..probe.rays {
        let d: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
        let max = d.iter().fold(0.0f64, |a, &x| a.max(x));
        directions.push(d.iter().map(|x| x / max).collect());
    }
    let grid = probe.grid.max(1);
    let results = par::map_indexed(directions.len(), |r| {
        for g in 1..=grid {
            let s = g as f64 / grid as f64;
            let dist = probe.reach * s * s;
            let w: Vec<f64> = z.iter().zip(&directions[r]).map(|(a, b)| a + dist * b).collect();
            if !(p.eval(&w)? > 0.0) {
                return Ok(Some(w));
            }
        }
        Ok::<_, Error>(None)
    });
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness = Some(w);
            break;
        }
    }
    Ok(AboveEvidence {
        above: witness.is_none() || certified,
        certified,
        points_checked: 1 + directions.len() * grid,
        witness,
    })
}

/// Evidence for the statement that a point above the roots of `p` with
/// `Φ^i_p(z) < 1` is also above the roots of `p − ∂_i p`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AboveLemmaReport {
    pub direction: usize,
    pub barrier: f64,
    pub before: AboveEvidence,
    pub after: AboveEvidence,
    pub holds: bool,
}

pub fn lemma_above_check<P: BarrierPolynomial>(
    p: &P,
    z: &[f64],
    i: usize,
    probe: &Probe,
    policy: &NumericPolicy,
) -> Result<AboveLemmaReport> {
    let before = above_roots_probe(p, z, probe)?;
    if !before.above {
        return Err(Error::Precondition("point is not above the roots".into()));
    }
    let barrier = barrier_value(p, z, i, policy)?;
    if !(barrier < 1.0) {
        return Err(Error::Precondition(format!(
            "barrier in direction {i} is {barrier}, not below 1"
        )));
    }
    let after = above_roots_probe(&p.one_minus_partial(i)?, z, probe)?;
    Ok(AboveLemmaReport {
        direction: i,
        barrier,
        holds: after.above,
        before,
        after,
    })
}

/// Evidence for `Φ^i_{p − ∂_j p}(z + δ e_j) ≤ Φ^i_p(z)` in every direction `i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BarrierLemmaReport {
    pub direction: usize,
    pub delta: f64,
    /// `Φ^j_p(z)`, which must not exceed `1 − 1/δ`.
    pub barrier: f64,
    /// `Φ^i_p(z)` for every `i`.
    pub before: Vec<f64>,
    /// `Φ^i_{p − ∂_j p}(z + δ e_j)` for every `i`.
    pub after: Vec<f64>,
    pub shifted_above: AboveEvidence,
    pub holds: bool,
}

pub fn lemma_barrier_check<P: BarrierPolynomial>(
    p: &P,
    z: &[f64],
    j: usize,
    delta: f64,
    probe: &Probe,
    policy: &NumericPolicy,
) -> Result<BarrierLemmaReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("shift {delta} must be positive")));
    }
    let barrier = barrier_value(p, z, j, policy)?;
    let limit = 1.0 - 1.0 / delta;
    if barrier > limit + policy.barrier_tol * limit.abs().max(1.0) {
        return Err(Error::Precondition(format!(
            "barrier in direction {j} is {barrier}, above 1 − 1/δ = {limit}"
        )));
    }
    if !above_roots_probe(p, z, probe)?.above {
        return Err(Error::Precondition("point is not above the roots".into()));
    }
    let q = p.one_minus_partial(j)?;
    let mut shifted = z.to_vec();
    shifted[j] += delta;
    let before = barrier_values(p, z, policy)?;
    let after = barrier_values(&q, &shifted, policy)?;
    let shifted_above = above_roots_probe(&q, &shifted, probe)?;
    let decreased = before
        .iter()
        .zip(&after)
        .all(|(b, a)| *a <= b + policy.barrier_tol * b.abs().max(1.0));
    Ok(BarrierLemmaReport {
        direction: j,
        delta,
        barrier,
        holds: decreased && shifted_above.above,
        before,
        after,
        shifted_above,
    })
}

/// One shift of a monotonicity/convexity probe.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotoneEntry {
    pub delta: f64,
    /// `Φ^i(z)`.
    pub base: f64,
    /// `Φ^i(z + δ e_j)`.
    pub shifted: f64,
    /// `∂_j Φ^i(z + δ e_j)`, by finite differences.
    pub slope: f64,
    pub monotone: bool,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotoneReport {
    pub i: usize,
    pub j: usize,
    pub entries: Vec<MonotoneEntry>,
}

impl MonotoneReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.monotone && e.convex)
    }
}

/// Checks `Φ^i(z + δe_j) ≤ Φ^i(z)` and
/// `Φ^i(z + δe_j) ≤ Φ^i(z) + δ ∂_jΦ^i(z + δe_j)` for every `δ` in `deltas`.
pub fn monotonicity_convexity_probe<P: BarrierPolynomial + ?Sized>(
    p: &P,
    z: &[f64],
    i: usize,
    j: usize,
    deltas: &[f64],
    policy: &NumericPolicy,
) -> Result<MonotoneReport> {
    check_point(p, z, Some(i))?;
    check_point(p, z, Some(j))?;
    let base = barrier_value(p, z, i, policy)?;
    let entries = deltas
        .iter()
        .map(|&delta| {
            let mut w = z.to_vec();
            w[j] += delta;
            let shifted = barrier_value(p, &w, i, policy)?;
            let slope = barrier_slope(p, &w, i, j, policy)?;
            let scale = base.abs().max(1.0);
            Ok(MonotoneEntry {
                delta,
                base,
                shifted,
                slope,
                monotone: shifted <= base + policy.barrier_tol * scale,
                convex: shifted <= base + delta * slope + policy.fd_tol * scale,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotoneReport { i, j, entries })
}

/// `∂_j Φ^i(w)` by a Richardson-extrapolated central difference.
fn barrier_slope<P: BarrierPolynomial + ?Sized>(
    p: &P,
    w: &[f64],
    i: usize,
    j: usize,
    policy: &NumericPolicy,
) -> Result<f64> {
    let h = policy.fd_step * (1.0 + w[j].abs());
    let central = |h: f64| -> Result<f64> {
        let mut plus = w.to_vec();
        let mut minus = w.to_vec();
        plus[j] += h;
        minus[j] -= h;
        Ok((barrier_value(p, &plus, i, policy)? - barrier_value(p, &minus, i, policy)?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
