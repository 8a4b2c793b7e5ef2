//! Weaver KS_r partitioning: isotropic vector systems, their generators, the
//! direct-sum lift to a random-vector ensemble, and partitions found by
//! tree descent on the lifted ensemble.

mod experiment;
mod graph;

pub use experiment::{diagonal_structure, random_partition_experiment, ChernoffStats, TrialOutcome};
pub use graph::{gen_from_graph, spectral_approx_check, spectral_cross_check, Graph, GraphInstance, PartSpectrum};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::interlace::{descend, DescentTrace};
use crate::linalg::{distance_to_identity, isotropic_normalizer, operator_norm, ComplexVector, HermitianMatrix};
use crate::math::{round, sqrt};
use crate::mixedchar::{FiniteSupportVector, RandomVectorEnsemble};
use crate::policy::NumericPolicy;
use crate::Complex64;

/// Vectors `u_1, …, u_m ∈ ℂ^d` with a declared bound `δ` on `‖u_i‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeaverInstance {
    dim: usize,
    vectors: Vec<ComplexVector>,
    delta: f64,
}

impl WeaverInstance {
    /// `delta` defaults to the largest squared norm.
    pub fn new(dim: usize, vectors: Vec<ComplexVector>, delta: Option<f64>) -> Result<Self> {
        if let Some(u) = vectors.iter().find(|u| u.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: u.dim(),
            });
        }
        let measured = max_norm_sqr(&vectors);
        let delta = delta.unwrap_or(measured);
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "δ = {delta} must be finite and nonnegative"
            )));
        }
        Ok(Self { dim, vectors, delta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The declared bound; advisory only.
    pub fn declared_delta(&self) -> f64 {
        self.delta
    }

    /// `max ‖u_i‖²`.
    pub fn measured_delta(&self) -> f64 {
        max_norm_sqr(&self.vectors)
    }

    /// `Σ u_i u_i*`.
    pub fn frame_operator(&self) -> HermitianMatrix {
        let mut s = HermitianMatrix::zeros(self.dim);
        for u in &self.vectors {
            s.add_outer(u, 1.0);
        }
        s
    }

    /// `‖Σ_{i∈part} u_i u_i*‖`.
    pub fn part_norm(&self, part: &[usize], policy: &NumericPolicy) -> Result<f64> {
        let mut s = HermitianMatrix::zeros(self.dim);
        for &i in part {
            let u = self
                .vectors
                .get(i)
                .ok_or_else(|| Error::IndexOutOfRange(format!("vector {i} of {}", self.len())))?;
            s.add_outer(u, 1.0);
        }
        operator_norm(&s, policy)
    }
}

fn max_norm_sqr(vectors: &[ComplexVector]) -> f64 {
    vectors.iter().fold(0.0, |a, u| a.max(u.norm_sqr()))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    /// `‖Σ u u* − I‖`.
    pub deviation: f64,
    pub max_norm_sqr: f64,
    pub declared_delta: f64,
    pub isotropic: bool,
    pub within_delta: bool,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.isotropic && self.within_delta
    }
}

/// Measures isotropy (`isotropy_tol`) and the declared norm bound
/// (`norm_slack`).
pub fn validate(inst: &WeaverInstance, policy: &NumericPolicy) -> ValidationReport {
    let deviation = distance_to_identity(&inst.frame_operator());
    let max_norm_sqr = inst.measured_delta();
    ValidationReport {
        deviation,
        max_norm_sqr,
        declared_delta: inst.delta,
        isotropic: deviation <= policy.isotropy_tol,
        within_delta: max_norm_sqr <= inst.delta + policy.norm_slack,
    }
}

/// Renormalises by `(Σ u u*)^{−1/2}` when the deviation from isotropy is at
/// most `repair_tol`; `δ` becomes the new largest squared norm.
pub fn repair(inst: &WeaverInstance, policy: &NumericPolicy) -> Result<WeaverInstance> {
    let frame = inst.frame_operator();
    let deviation = distance_to_identity(&frame);
    if !(deviation <= policy.repair_tol) {
        return Err(Error::InvalidInstance(format!(
            "deviation from isotropy {deviation:e} exceeds the repair limit {:e}",
            policy.repair_tol
        )));
    }
    let w = isotropic_normalizer(&frame, policy)?;
    let vectors = inst
        .vectors
        .iter()
        .map(|u| w.matrix().mul_vec(u))
        .collect::<Result<Vec<_>>>()?;
    WeaverInstance::new(inst.dim, vectors, None)
}

/// `1/δ` copies of `√δ e_i` for each of the `n` basis directions.
pub fn gen_diagonal(n: usize, delta: f64) -> Result<WeaverInstance> {
    let copies = round(1.0 / delta);
    if !(delta > 0.0) || !(copies >= 1.0) || (copies * delta - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "1/δ must be a positive integer, got δ = {delta}"
        )));
    }
    let s = sqrt(delta);
    let vectors = (0..n)
        .flat_map(|i| (0..copies as usize).map(move |_| ComplexVector::basis(n, i).scaled(s)))
        .collect();
    WeaverInstance::new(n, vectors, Some(delta))
}

const GAUSSIAN_ATTEMPTS: u64 = 3;

/// `m = round(n/δ)` real Gaussian vectors with `E‖v‖² = δ`, whitened by
/// `V^{−1/2}` for `V = Σ v v*`. A rank-deficient `V` is redrawn from the next
/// stream of the same seed, up to three times. `δ` is the measured
/// `max ‖w_i‖²`.
pub fn gen_gaussian(n: usize, delta: f64, seed: u64, policy: &NumericPolicy) -> Result<WeaverInstance> {
    if n == 0 || !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 1 and δ > 0, got n = {n}, δ = {delta}"
        )));
    }
    let m = round(n as f64 / delta) as usize;
    if m < n {
        return Err(Error::InvalidParameter(format!(
            "m = round(n/δ) = {m} is below n = {n}"
        )));
    }
    let normal = Normal::new(0.0, sqrt(delta / n as f64)).map_err(|e| Error::InvalidParameter(format!("{e}")))?;
    let mut last = Error::InvalidParameter("no draw".into());
    for attempt in 0..=GAUSSIAN_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let raw: Vec<ComplexVector> = (0..m)
            .map(|_| {
                let v: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
                ComplexVector::from_real(&v)
            })
            .collect();
        let mut frame = HermitianMatrix::zeros(n);
        raw.iter().for_each(|v| frame.add_outer(v, 1.0));
        match isotropic_normalizer(&frame, policy) {
            Ok(w) => {
                let vectors = raw.iter().map(|v| w.matrix().mul_vec(v)).collect::<Result<Vec<_>>>()?;
                return WeaverInstance::new(n, vectors, None);
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Direct-sum lift: vector `i` becomes `r` equally likely atoms, atom `k`
/// being `√r u_i` placed in block `k` of `ℂ^{rd}`.
pub fn lift(inst: &WeaverInstance, r: usize) -> Result<RandomVectorEnsemble> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    let d = inst.dim;
    let scale = sqrt(r as f64);
    let p = 1.0 / r as f64;
    let vectors = inst
        .vectors
        .iter()
        .map(|u| {
            let atoms = (0..r)
                .map(|k| {
                    let mut v = vec![Complex64::new(0.0, 0.0); r * d];
                    for (j, z) in u.as_slice().iter().enumerate() {
                        v[k * d + j] = z * scale;
                    }
                    Ok((p, ComplexVector::new(v)?))
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteSupportVector::new(atoms, &NumericPolicy::default())
        })
        .collect::<Result<Vec<_>>>()?;
    RandomVectorEnsemble::new(r * d, vectors)
}

/// `(1/√r + √δ)²`.
pub fn general_bound(r: usize, delta: f64) -> f64 {
    let s = 1.0 / sqrt(r as f64) + sqrt(delta);
    s * s
}

/// `½ + √(δ(1 − δ))` for `0 ≤ δ ≤ ½`; a comparison value only.
pub fn improved_bound_r2(delta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::InvalidParameter(format!("δ = {delta} must lie in [0, ½]")));
    }
    Ok(0.5 + sqrt(delta * (1.0 - delta)))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionReport {
    pub r: usize,
    /// Measured `max ‖u_i‖²`.
    pub delta: f64,
    pub declared_delta: f64,
    /// `parts[k]` lists the vectors assigned to part `k`.
    pub parts: Vec<Vec<usize>>,
    /// `‖Σ_{i∈parts[k]} u_i u_i*‖`.
    pub norms: Vec<f64>,
    pub max_norm: f64,
    pub bound_general: f64,
    /// Present when `r = 2` and `δ ≤ ½`.
    pub bound_r2_improved: Option<f64>,
    /// Largest root of the lifted `q_∅`; divided by `r` it bounds `max_norm`.
    pub root_of_empty: f64,
    /// `λ_max` of the lifted outcome, equal to `r · max_norm`.
    pub lifted_root: f64,
    pub within_bound: bool,
    pub trace: DescentTrace,
}

/// Partitions a valid instance into `r` parts by descending the lifted
/// ensemble. A norm above the bound is reported through `within_bound`.
pub fn partition(inst: &WeaverInstance, r: usize, policy: &NumericPolicy) -> Result<PartitionReport> {
    let check = validate(inst, policy);
    if !check.isotropic {
        return Err(Error::InvalidInstance(format!(
            "vectors are not isotropic (deviation {:e})",
            check.deviation
        )));
    }
    let ensemble = lift(inst, r)?;
    let trace = descend(&ensemble, policy)?;
    let mut parts = vec![Vec::new(); r];
    for (i, &k) in trace.final_assignment.as_slice().iter().enumerate() {
        parts[k].push(i);
    }
    let norms = parts
        .iter()
        .map(|part| inst.part_norm(part, policy))
        .collect::<Result<Vec<_>>>()?;
    let max_norm = norms.iter().fold(0.0f64, |a, &b| a.max(b));
    let delta = check.max_norm_sqr;
    let bound_general = general_bound(r, delta);
    // a measured δ of ½ may carry rounding above ½
    let clamped = if delta <= 0.5 + policy.norm_slack {
        delta.min(0.5)
    } else {
        delta
    };
    let bound_r2_improved = if r == 2 { improved_bound_r2(clamped).ok() } else { None };
    Ok(PartitionReport {
        r,
        delta,
        declared_delta: inst.delta,
        within_bound: max_norm <= bound_general + policy.bound_tol,
        parts,
        norms,
        max_norm,
        bound_general,
        bound_r2_improved,
        root_of_empty: trace.root_of_empty,
        lifted_root: trace.final_root,
        trace,
    })
}
