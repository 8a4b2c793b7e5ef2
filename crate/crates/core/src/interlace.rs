//! Interlacing-family tree descent.
//!
//! The conditional polynomials `q_{s_1…s_k}` of an ensemble form a tree whose
//! sibling sets have common interlacings, so at every node some child has a
//! largest root no larger than its parent's. Walking down by always taking the
//! child with the smallest largest root ends at an outcome whose
//! characteristic polynomial has largest root at most that of `q_∅`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::operator_norm;
use crate::mixedchar::{conditional_expected_poly, decode_leaf, Assignment, RandomVectorEnsemble};
use crate::par;
use crate::policy::NumericPolicy;
use crate::realpoly::{common_interlacing_test, has_common_interlacing, RealPolynomial, RootFinder};

/// One level of the descent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DescentStep {
    /// Number of vectors already fixed before this step.
    pub level: usize,
    /// Atom chosen for vector `level`.
    pub chosen: usize,
    /// Largest root of each child; `None` for zero-probability atoms.
    pub candidate_roots: Vec<Option<f64>>,
    pub chosen_root: f64,
}

/// Full record of a descent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DescentTrace {
    pub steps: Vec<DescentStep>,
    /// Largest root of `q_∅`, the mixed characteristic polynomial.
    pub root_of_empty: f64,
    pub final_assignment: Assignment,
    /// Largest root at the leaf, i.e. `λ_max` of the chosen outcome's sum.
    pub final_root: f64,
}

impl DescentTrace {
    /// `root_of_empty` followed by every chosen root.
    pub fn root_sequence(&self) -> Vec<f64> {
        core::iter::once(self.root_of_empty)
            .chain(self.steps.iter().map(|s| s.chosen_root))
            .collect()
    }

    /// Whether the root sequence never rises by more than `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.root_sequence().windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

fn child_polys(
    e: &RandomVectorEnsemble,
    prefix: &[usize],
    policy: &NumericPolicy,
) -> Result<Vec<Option<RealPolynomial>>> {
    let atoms = e.vectors()[prefix.len()].len();
    par::map_indexed(atoms, |t| {
        if e.vectors()[prefix.len()].probability(t) == 0.0 {
            return Ok(None);
        }
        let mut child = prefix.to_vec();
        child.push(t);
        conditional_expected_poly(e, &child, policy).map(Some)
    })
    .into_iter()
    .collect()
}

/// Walks the tree choosing, at each level, the child with the smallest
/// largest root (ties within `policy.tie_tol` go to the smallest index).
/// Aborts with [`Error::DescentAbort`] if no child stays within
/// `policy.descent_guard` of its parent.
pub fn descend(e: &RandomVectorEnsemble, policy: &NumericPolicy) -> Result<DescentTrace> {
    let finder = RootFinder::from_policy(policy);
    let root_of_empty = finder.largest_root(&conditional_expected_poly(e, &[], policy)?)?;
    let mut prefix = Vec::with_capacity(e.len());
    let mut steps = Vec::with_capacity(e.len());
    let mut parent = root_of_empty;
    for level in 0..e.len() {
        let candidate_roots = child_polys(e, &prefix, policy)?
            .iter()
            .map(|q| q.as_ref().map(|q| finder.largest_root(q)).transpose())
            .collect::<Result<Vec<_>>>()?;
        let best = candidate_roots.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        if !(best <= parent + policy.descent_guard) {
            return Err(Error::DescentAbort {
                level,
                prefix,
                parent_root: parent,
                best_child: best,
            });
        }
        let chosen = candidate_roots
            .iter()
            .position(|r| r.is_some_and(|r| r <= best + policy.tie_tol))
            .expect("a finite minimum exists");
        let chosen_root = candidate_roots[chosen].expect("chosen child has a root");
        prefix.push(chosen);
        steps.push(DescentStep {
            level,
            chosen,
            candidate_roots,
            chosen_root,
        });
        parent = chosen_root;
    }
    Ok(DescentTrace {
        steps,
        root_of_empty,
        final_root: parent,
        final_assignment: Assignment(prefix),
    })
}

/// A failed check at one node of the tree.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyViolation {
    pub prefix: Vec<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ViolationKind {
    /// A sampled convex combination of the children was not real-rooted.
    SampledCombination,
    /// The children's roots admit no common interlacing.
    RootIntervals,
    /// Parent coefficients differ from the sum of the children's.
    TreeSum { deviation: f64 },
    /// A child polynomial could not be root-found.
    Rootedness,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyReport {
    pub internal_nodes: usize,
    pub violations: Vec<FamilyViolation>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every internal node: the children (with positive probability) must
/// pass the sampled common-interlacing test and the root-interval criterion,
/// and the parent must equal the sum of its children. `samples` random
/// convex combinations are drawn per node, seeded from `seed` and the node's
/// position so results do not depend on evaluation order.
pub fn verify_interlacing_family(
    e: &RandomVectorEnsemble,
    samples: usize,
    seed: u64,
    policy: &NumericPolicy,
) -> Result<FamilyReport> {
    let leaves = e.leaf_count();
    if leaves > policy.verify_cap {
        return Err(Error::Capacity {
            what: "interlacing-family leaves",
            needed: leaves,
            cap: policy.verify_cap,
        });
    }
    let mut level: Vec<(Vec<usize>, RealPolynomial)> = vec![(Vec::new(), conditional_expected_poly(e, &[], policy)?)];
    let mut internal_nodes = 0;
    let mut violations = Vec::new();
    let mut node_id: u64 = 0;
    for k in 0..e.len() {
        internal_nodes += level.len();
        let base = node_id;
        node_id += level.len() as u64;
        let results = par::map_indexed(level.len(), |n| {
            let (prefix, parent) = &level[n];
            let children = child_polys(e, prefix, policy)?;
            let mut found = Vec::new();
            let live: Vec<RealPolynomial> = children.iter().flatten().cloned().collect();
            let sum: RealPolynomial = live.iter().cloned().sum();
            let deviation = parent.max_rel_deviation(&sum);
            if deviation > policy.tree_sum_tol {
                found.push(ViolationKind::TreeSum { deviation });
            }
            let node_seed = seed ^ (base + n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            match common_interlacing_test(&live, samples, policy.real_root_tol, node_seed) {
                Ok(true) => {}
                Ok(false) => found.push(ViolationKind::SampledCombination),
                Err(_) => found.push(ViolationKind::Rootedness),
            }
            match has_common_interlacing(&live, policy.interlace_tol) {
                Ok(true) => {}
                Ok(false) => found.push(ViolationKind::RootIntervals),
                Err(_) => found.push(ViolationKind::Rootedness),
            }
            let next: Vec<(Vec<usize>, RealPolynomial)> = children
                .into_iter()
                .enumerate()
                .filter_map(|(t, q)| {
                    q.map(|q| {
                        let mut p = prefix.clone();
                        p.push(t);
                        (p, q)
                    })
                })
                .collect();
            Ok::<_, Error>((found, next))
        });
        let mut next_level = Vec::new();
        for (n, r) in results.into_iter().enumerate() {
            let (found, next) = r?;
            violations.extend(found.into_iter().map(|kind| FamilyViolation {
                prefix: level[n].0.clone(),
                kind,
            }));
            next_level.extend(next);
        }
        if k + 1 == e.len() {
            break;
        }
        level = next_level;
    }
    Ok(FamilyReport {
        internal_nodes,
        violations,
    })
}

const LEAF_CHUNK: usize = 256;

/// The positive-probability outcome minimising `λ_max(Σ w_{i,s_i} w_{i,s_i}*)`
/// (smallest leaf number on ties), by enumeration.
pub fn exhaustive_minimum(e: &RandomVectorEnsemble, policy: &NumericPolicy) -> Result<(Assignment, f64)> {
    let leaves = e.leaf_count();
    if leaves > policy.exhaustive_cap {
        return Err(Error::Capacity {
            what: "exhaustive-minimum leaves",
            needed: leaves,
            cap: policy.exhaustive_cap,
        });
    }
    let radices: Vec<usize> = e.vectors().iter().map(|v| v.len()).collect();
    let partials = par::map_chunks(leaves as usize, LEAF_CHUNK, |range| {
        let mut idx = vec![0; radices.len()];
        let mut best: Option<(u64, f64)> = None;
        for leaf in range {
            decode_leaf(leaf as u64, &radices, &mut idx);
            if e.probability_of(&idx) == 0.0 {
                continue;
            }
            let norm = operator_norm(&e.outcome_sum(&idx), policy)?;
            if best.is_none_or(|(_, b)| norm < b) {
                best = Some((leaf as u64, norm));
            }
        }
        Ok::<_, Error>(best)
    });
    let mut best: Option<(u64, f64)> = None;
    for part in partials {
        if let Some((leaf, norm)) = part? {
            if best.is_none_or(|(_, b)| norm < b) {
                best = Some((leaf, norm));
            }
        }
    }
    let (leaf, norm) = best.ok_or_else(|| Error::InvalidDistribution("no positive-probability outcome".into()))?;
    let mut idx = vec![0; radices.len()];
    decode_leaf(leaf, &radices, &mut idx);
    Ok((Assignment(idx), norm))
}
