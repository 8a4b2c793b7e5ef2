//! Monte-Carlo comparison: uniformly random partitions against the
//! descent's guarantee.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WeaverInstance;
use crate::error::{Error, Result};
use crate::math::{powi, sqrt};
use crate::par;
use crate::policy::NumericPolicy;

/// One random partition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialOutcome {
    pub trial: u64,
    /// `max_k ‖Σ_{i∈A_k} u_i u_i*‖`.
    pub max_norm: f64,
    /// Norm of part 0.
    pub first_part_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChernoffStats {
    pub r: usize,
    pub threshold: f64,
    pub samples: Vec<TrialOutcome>,
    pub mean_max_norm: Option<f64>,
    pub std_max_norm: Option<f64>,
    /// Fraction of trials with every part norm `≤ threshold`.
    pub balanced_frequency: Option<f64>,
    /// Fraction of trials with part 0's norm `≤ threshold`.
    pub one_sided_frequency: Option<f64>,
    /// For `n` directions with `k` copies of `√δ e_i` each:
    /// `(1 − r^{−k})ⁿ`, the chance that no direction lands entirely in part 0.
    pub analytic_one_sided: Option<f64>,
    /// `(1 − r^{1−k})ⁿ`, the chance that no direction lands entirely in one part.
    pub analytic_balanced: Option<f64>,
}

/// `(n, k)` when the instance consists of `k` equal-norm multiples of each
/// of the `n` basis vectors.
pub fn diagonal_structure(inst: &WeaverInstance) -> Option<(usize, usize)> {
    let n = inst.dim();
    let first = inst.vectors().first()?.norm_sqr();
    let mut counts = vec![0usize; n];
    for u in inst.vectors() {
        let nonzero: Vec<usize> = (0..n).filter(|&j| u[j].norm_sqr() != 0.0).collect();
        if nonzero.len() != 1 || (u.norm_sqr() - first).abs() > 1e-12 * first {
            return None;
        }
        counts[nonzero[0]] += 1;
    }
    let k = counts[0];
    (k > 0 && counts.iter().all(|&c| c == k)).then_some((n, k))
}

/// Draws `trials` uniform assignments of the vectors to `r` parts. Trial
/// `t` uses stream `t` of the ChaCha8 generator seeded with `seed`, so the
/// samples do not depend on the thread count.
pub fn random_partition_experiment(
    inst: &WeaverInstance,
    r: usize,
    trials: u64,
    seed: u64,
    threshold: f64,
    policy: &NumericPolicy,
) -> Result<ChernoffStats> {
    if r < 2 {
        return Err(Error::InvalidParameter(alloc::format!("r = {r} must be at least 2")));
    }
    let samples = par::map_indexed(trials as usize, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let mut parts = vec![Vec::new(); r];
        for i in 0..inst.len() {
            parts[rng.random_range(0..r)].push(i);
        }
        let norms = parts
            .iter()
            .map(|p| inst.part_norm(p, policy))
            .collect::<Result<Vec<_>>>()?;
        Ok::<_, Error>(TrialOutcome {
            trial: t as u64,
            max_norm: norms.iter().fold(0.0f64, |a, &b| a.max(b)),
            first_part_norm: norms[0],
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let count = samples.len() as f64;
    let frequency = |hit: &dyn Fn(&TrialOutcome) -> bool| {
        (!samples.is_empty()).then(|| samples.iter().filter(|s| hit(s)).count() as f64 / count)
    };
    let mean = (!samples.is_empty()).then(|| samples.iter().map(|s| s.max_norm).sum::<f64>() / count);
    let std = mean.map(|m| sqrt(samples.iter().map(|s| (s.max_norm - m) * (s.max_norm - m)).sum::<f64>() / count));
    let diagonal = diagonal_structure(inst);
    let rf = r as f64;
    Ok(ChernoffStats {
        r,
        threshold,
        mean_max_norm: mean,
        std_max_norm: std,
        balanced_frequency: frequency(&|s| s.max_norm <= threshold),
        one_sided_frequency: frequency(&|s| s.first_part_norm <= threshold),
        analytic_one_sided: diagonal.map(|(n, k)| powi(1.0 - powi(rf, -(k as i32)), n as i32)),
        analytic_balanced: diagonal.map(|(n, k)| powi((1.0 - powi(rf, 1 - k as i32)).max(0.0), n as i32)),
        samples,
    })
}
