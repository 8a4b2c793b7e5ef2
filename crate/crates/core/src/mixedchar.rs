//! Expected and mixed characteristic polynomials.
//!
//! For independent random vectors `v_i` with `A_i = E v_i v_i*`, the
//! expected characteristic polynomial of `Σ v_i v_i*` equals the mixed
//! characteristic polynomial
//! `μ(A_1, …, A_m; x) = ∏(1 − ∂_{z_i}) det(xI + Σ z_i A_i)|_{z=0}`.
//!
//! **Subset expansion.** `det(xI + Σ z_i A_i)` is homogeneous of degree `d` in
//! `(x, z)`, so the multiaffine coefficient of `z_S` is `c_S x^{d−|S|}` and
//! vanishes for `|S| > d`. Inclusion–exclusion over `T ⊆ S` isolates `c_S`,
//! and summing over `S` collapses to
//!
//! ```text
//! [x^{d−s}] μ = Σ_{|T| ≤ s} (−1)^{|T|} C(m − |T|, s − |T|) e_s(Σ_{i∈T} A_i)
//! ```
//!
//! where `e_s(M)` is the `s`-th elementary symmetric function of the
//! eigenvalues of `M`. Only `C(m, ≤d)` characteristic polynomials are needed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{char_poly_coeffs, ComplexVector, HermitianMatrix};
use crate::math::{binomial, subsets_up_to};
use crate::par;
use crate::policy::NumericPolicy;
use crate::realpoly::{RealPolynomial, RootFinder};

/// A random vector taking finitely many values.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupportVector {
    atoms: Vec<(f64, ComplexVector)>,
}

impl FiniteSupportVector {
    /// Atoms are `(probability, value)` pairs whose probabilities must sum
    /// to one within `policy.prob_tol`. Drift beyond the rounding error of
    /// the sum itself is renormalised away; smaller deviations are left
    /// alone so that construction is idempotent and files round-trip.
    pub fn new(atoms: Vec<(f64, ComplexVector)>, policy: &NumericPolicy) -> Result<Self> {
        let Some(dim) = atoms.first().map(|a| a.1.dim()) else {
            return Err(Error::InvalidDistribution("no atoms".into()));
        };
        if let Some((j, a)) = atoms.iter().enumerate().find(|(_, a)| a.1.dim() != dim) {
            return Err(Error::InvalidDistribution(format!(
                "atom {j} has dimension {} but atom 0 has dimension {dim}",
                a.1.dim()
            )));
        }
        if let Some((j, a)) = atoms
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.0.is_finite() && (0.0..=1.0).contains(&a.0)))
        {
            return Err(Error::InvalidDistribution(format!(
                "atom {j} has probability {} outside [0, 1]",
                a.0
            )));
        }
        let total: f64 = atoms.iter().map(|a| a.0).sum();
        if (total - 1.0).abs() > policy.prob_tol {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        let rounding = 4.0 * atoms.len() as f64 * f64::EPSILON;
        let atoms = if (total - 1.0).abs() > rounding {
            atoms.into_iter().map(|(p, w)| (p / total, w)).collect()
        } else {
            atoms
        };
        Ok(Self { atoms })
    }

    /// The constant random vector `u`.
    pub fn deterministic(u: ComplexVector) -> Self {
        Self { atoms: vec![(1.0, u)] }
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].1.dim()
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[(f64, ComplexVector)] {
        &self.atoms
    }

    pub fn probability(&self, j: usize) -> f64 {
        self.atoms[j].0
    }

    pub fn value(&self, j: usize) -> &ComplexVector {
        &self.atoms[j].1
    }
}

/// `E v v* = Σ_j p_j w_j w_j*`.
pub fn covariance(v: &FiniteSupportVector) -> HermitianMatrix {
    let mut m = HermitianMatrix::zeros(v.dim());
    for (p, w) in &v.atoms {
        m.add_outer(w, *p);
    }
    m
}

/// Independent finite-support random vectors sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVectorEnsemble {
    dim: usize,
    vectors: Vec<FiniteSupportVector>,
}

impl RandomVectorEnsemble {
    pub fn new(dim: usize, vectors: Vec<FiniteSupportVector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of random vectors `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[FiniteSupportVector] {
        &self.vectors
    }

    /// `∏ l_i`, saturating.
    pub fn leaf_count(&self) -> u64 {
        self.vectors
            .iter()
            .fold(1u64, |acc, v| acc.saturating_mul(v.len() as u64))
    }

    pub fn covariances(&self) -> Vec<HermitianMatrix> {
        self.vectors.iter().map(covariance).collect()
    }

    /// `∏ p_{i,s_i}` over a (partial) assignment.
    pub fn probability_of(&self, prefix: &[usize]) -> f64 {
        prefix
            .iter()
            .zip(&self.vectors)
            .map(|(&s, v)| v.probability(s))
            .product()
    }

    /// `Σ w_{i,s_i} w_{i,s_i}*` over a (partial) assignment.
    pub fn outcome_sum(&self, prefix: &[usize]) -> HermitianMatrix {
        let mut m = HermitianMatrix::zeros(self.dim);
        for (&s, v) in prefix.iter().zip(&self.vectors) {
            m.add_outer(v.value(s), 1.0);
        }
        m
    }

    fn check_prefix(&self, prefix: &[usize]) -> Result<()> {
        if prefix.len() > self.len() {
            return Err(Error::IndexOutOfRange(format!(
                "prefix of length {} for {} vectors",
                prefix.len(),
                self.len()
            )));
        }
        for (i, (&s, v)) in prefix.iter().zip(&self.vectors).enumerate() {
            if s >= v.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "vector {i} has {} atoms, index {s} requested",
                    v.len()
                )));
            }
        }
        Ok(())
    }
}

/// PSD matrices `A_1, …, A_m` of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedInstance {
    dim: usize,
    matrices: Vec<HermitianMatrix>,
}

impl MixedInstance {
    pub fn new(dim: usize, matrices: Vec<HermitianMatrix>, policy: &NumericPolicy) -> Result<Self> {
        for a in &matrices {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
            a.check_psd(policy)?;
        }
        Ok(Self { dim, matrices })
    }

    /// The covariances of an ensemble (PSD by construction).
    pub fn from_ensemble(e: &RandomVectorEnsemble) -> Self {
        Self {
            dim: e.dim(),
            matrices: e.covariances(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn sum(&self) -> HermitianMatrix {
        HermitianMatrix::sum(self.dim, &self.matrices)
    }

    /// `max_i tr(A_i)`.
    pub fn max_trace(&self) -> f64 {
        self.matrices.iter().map(HermitianMatrix::trace).fold(0.0, f64::max)
    }
}

/// One atom index per random vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    /// Checks length and bounds against an ensemble.
    pub fn new(indices: Vec<usize>, e: &RandomVectorEnsemble) -> Result<Self> {
        if indices.len() != e.len() {
            return Err(Error::IndexOutOfRange(format!(
                "assignment of length {} for {} vectors",
                indices.len(),
                e.len()
            )));
        }
        e.check_prefix(&indices)?;
        Ok(Self(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Mixed-radix decoding of a leaf number into atom indices.
pub(crate) fn decode_leaf(mut leaf: u64, radices: &[usize], out: &mut [usize]) {
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = (leaf % r as u64) as usize;
        leaf /= r as u64;
    }
}

const LEAF_CHUNK: usize = 256;

/// `Σ_s (∏ p_{i,s_i}) χ(Σ w_{i,s_i} w_{i,s_i}*)` over every outcome tuple.
pub fn expected_char_poly_bruteforce(e: &RandomVectorEnsemble, policy: &NumericPolicy) -> Result<RealPolynomial> {
    let leaves = e.leaf_count();
    if leaves > policy.brute_force_cap {
        return Err(Error::Capacity {
            what: "brute-force outcome tuples",
            needed: leaves,
            cap: policy.brute_force_cap,
        });
    }
    let d = e.dim();
    let radices: Vec<usize> = e.vectors().iter().map(FiniteSupportVector::len).collect();
    let partials = par::map_chunks(leaves as usize, LEAF_CHUNK, |range| {
        let mut acc = vec![0.0; d + 1];
        let mut idx = vec![0; radices.len()];
        for leaf in range {
            decode_leaf(leaf as u64, &radices, &mut idx);
            let p = e.probability_of(&idx);
            if p == 0.0 {
                continue;
            }
            let c = char_poly_coeffs(e.outcome_sum(&idx).matrix());
            acc.iter_mut().zip(&c).for_each(|(a, x)| *a += p * x);
        }
        acc
    });
    let mut total = vec![0.0; d + 1];
    for part in partials {
        total.iter_mut().zip(&part).for_each(|(a, x)| *a += x);
    }
    RealPolynomial::try_new(total)
}

/// Subsets of `0..m` with at most `d` elements as bitmasks, by size and then
/// lexicographically.
fn subsets_by_size(m: usize, d: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut layer: Vec<u32> = vec![0];
    for k in 0..=d.min(m) {
        out.extend_from_slice(&layer);
        if k == d.min(m) {
            break;
        }
        let mut next = Vec::new();
        for &s in &layer {
            let start = if s == 0 { 0 } else { 32 - s.leading_zeros() as usize };
            for i in start..m {
                next.push(s | (1 << i));
            }
        }
        layer = next;
    }
    out
}

const SUBSET_CHUNK: usize = 64;

/// The subset expansion over PSD matrices of dimension `d`; no validation.
pub(crate) fn mixed_char_poly_of(
    d: usize,
    matrices: &[&HermitianMatrix],
    policy: &NumericPolicy,
) -> Result<RealPolynomial> {
    // Zero matrices do not depend on their variable and drop out of μ.
    let mats: Vec<&HermitianMatrix> = matrices
        .iter()
        .copied()
        .filter(|a| a.matrix().as_slice().iter().any(|z| z.re != 0.0 || z.im != 0.0))
        .collect();
    let m = mats.len();
    if m > policy.max_vectors {
        return Err(Error::Capacity {
            what: "matrices in the subset expansion",
            needed: m as u64,
            cap: policy.max_vectors as u64,
        });
    }
    let needed = subsets_up_to(m, d);
    if needed > policy.subset_cap {
        return Err(Error::Capacity {
            what: "subsets in the subset expansion",
            needed,
            cap: policy.subset_cap,
        });
    }
    let subsets = subsets_by_size(m, d);
    // weight[t][s] = (−1)^t C(m − t, s − t)
    let weight: Vec<Vec<f64>> = (0..=d)
        .map(|t| {
            (0..=d)
                .map(|s| {
                    if s < t || t > m {
                        0.0
                    } else {
                        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                        sign * binomial(m - t, s - t)
                    }
                })
                .collect()
        })
        .collect();
    let partials = par::map_chunks(subsets.len(), SUBSET_CHUNK, |range| {
        // acc[s] accumulates [x^{d−s}] μ
        let mut acc = vec![0.0; d + 1];
        for &mask in &subsets[range] {
            let t = mask.count_ones() as usize;
            let mut sum = HermitianMatrix::zeros(d);
            for (i, a) in mats.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum.add_assign(a);
                }
            }
            let chi = char_poly_coeffs(sum.matrix());
            for s in t..=d {
                // e_s(Σ_T A) = (−1)^s [x^{d−s}] χ
                let e_s = if s % 2 == 0 { chi[d - s] } else { -chi[d - s] };
                acc[s] += weight[t][s] * e_s;
            }
        }
        acc
    });
    let mut by_s = vec![0.0; d + 1];
    for part in partials {
        by_s.iter_mut().zip(&part).for_each(|(a, x)| *a += x);
    }
    let coeffs: Vec<f64> = (0..=d).map(|k| by_s[d - k]).collect();
    RealPolynomial::try_new(coeffs)
}

/// `μ(A_1, …, A_m; x)`: monic of degree `d` and real-rooted.
pub fn mixed_char_poly(inst: &MixedInstance, policy: &NumericPolicy) -> Result<RealPolynomial> {
    for a in inst.matrices() {
        a.check_psd(policy)?;
    }
    let refs: Vec<&HermitianMatrix> = inst.matrices().iter().collect();
    mixed_char_poly_of(inst.dim(), &refs, policy)
}

/// The conditional polynomial `q_{s_1…s_k} = (∏ p_{i,s_i})·μ(w_1w_1*, …,
/// w_kw_k*, A_{k+1}, …, A_m)`: the part of the expected characteristic
/// polynomial coming from outcomes that start with `prefix`.
pub fn conditional_expected_poly(
    e: &RandomVectorEnsemble,
    prefix: &[usize],
    policy: &NumericPolicy,
) -> Result<RealPolynomial> {
    e.check_prefix(prefix)?;
    let weight = e.probability_of(prefix);
    if prefix.len() == e.len() {
        let chi = char_poly_coeffs(e.outcome_sum(prefix).matrix());
        return Ok(RealPolynomial::try_new(chi)?.scaled(weight));
    }
    let fixed: Vec<HermitianMatrix> = prefix
        .iter()
        .zip(e.vectors())
        .map(|(&s, v)| v.value(s).outer_self())
        .collect();
    let rest: Vec<HermitianMatrix> = e.vectors()[prefix.len()..].iter().map(covariance).collect();
    let refs: Vec<&HermitianMatrix> = fixed.iter().chain(&rest).collect();
    Ok(mixed_char_poly_of(e.dim(), &refs, policy)?.scaled(weight))
}

/// `λ_max χ(Σ A_i)` against `λ_max μ(A_1, …, A_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CohenReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Numerical check of `λ_max χ(Σ A_i) ≤ λ_max μ(A_1, …, A_m) + policy.cohen_tol`.
pub fn cohen_inequality_check(inst: &MixedInstance, policy: &NumericPolicy) -> Result<CohenReport> {
    let finder = RootFinder::from_policy(policy);
    let lhs = finder.largest_root(&RealPolynomial::try_new(char_poly_coeffs(inst.sum().matrix()))?)?;
    let rhs = finder.largest_root(&mixed_char_poly(inst, policy)?)?;
    Ok(CohenReport {
        lhs,
        rhs,
        holds: lhs <= rhs + policy.cohen_tol,
    })
}
