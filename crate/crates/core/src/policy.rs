//! Every tolerance and capacity limit used by the library, in one record.

/// Numeric policy. Tolerances are relative to a natural scale (matrix norm,
/// leading coefficient or root magnitude) unless noted.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct NumericPolicy {
    /// `‖M − M*‖ ≤ hermitian_tol · ‖M‖`.
    pub hermitian_tol: f64,
    /// `|det A| < singular_tol · (max row norm)^d` is singular.
    pub singular_tol: f64,
    /// Smallest eigenvalue `≥ −psd_tol · max(1, ‖M‖)` counts as PSD.
    pub psd_tol: f64,
    /// Smallest eigenvalue below `rank_tol · ‖M‖` is rank deficient.
    pub rank_tol: f64,
    /// Companion eigenvalues with `|Im| ≤ real_root_tol · (1 + max|root|)` are real.
    pub real_root_tol: f64,
    /// Relative value below which a critical point is accepted as a multiple root.
    pub multiple_root_tol: f64,
    /// Roots closer than `cluster_tol · scale` are reported as one cluster.
    pub cluster_tol: f64,
    /// Slack for weak interlacing inequalities.
    pub interlace_tol: f64,
    /// Slack allowed for a chosen child's root over its parent's.
    pub descent_guard: f64,
    /// Child roots within this distance are ties (smallest index wins).
    pub tie_tol: f64,
    /// Relative coefficient slack for tree-sum identities.
    pub tree_sum_tol: f64,
    /// `‖Σuu* − I‖ ≤ isotropy_tol` for a valid instance.
    pub isotropy_tol: f64,
    /// `max‖u‖² ≤ δ + norm_slack`.
    pub norm_slack: f64,
    /// Deviation that near-isotropy repair may correct.
    pub repair_tol: f64,
    /// Support probabilities are renormalised when `|Σp − 1| ≤ prob_tol`.
    pub prob_tol: f64,
    /// Absolute slack for the mixed-versus-plain largest-root inequality.
    pub cohen_tol: f64,
    /// Slack on certified bounds.
    pub bound_tol: f64,
    /// Certificates need `‖ΣA_i − I‖ ≤ identity_tol`.
    pub identity_tol: f64,
    /// Relative slack on barrier comparisons.
    pub barrier_tol: f64,
    /// Relative slack on comparisons involving finite-difference derivatives.
    pub fd_tol: f64,
    /// Barrier poles: `|p(z)| ≤ pole_tol · scale`.
    pub pole_tol: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Brute-force expectation leaf cap.
    pub brute_force_cap: u64,
    /// Subset-expansion cap on `C(m, ≤d)`.
    pub subset_cap: u64,
    /// Maximum number of random vectors for the subset expansion.
    pub max_vectors: usize,
    /// Enumeration cap for interlacing-family verification.
    pub verify_cap: u64,
    /// Enumeration cap for the exhaustive minimum.
    pub exhaustive_cap: u64,
    /// Maximum number of `(1 − ∂)` factors in a barrier evaluator.
    pub max_operators: usize,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-12,
            singular_tol: 1e-12,
            psd_tol: 1e-10,
            rank_tol: 1e-10,
            real_root_tol: 1e-7,
            multiple_root_tol: 1e-10,
            cluster_tol: 1e-6,
            interlace_tol: 1e-8,
            descent_guard: 1e-8,
            tie_tol: 1e-10,
            tree_sum_tol: 1e-9,
            isotropy_tol: 1e-8,
            norm_slack: 1e-10,
            repair_tol: 1e-4,
            prob_tol: 1e-9,
            cohen_tol: 1e-8,
            bound_tol: 1e-7,
            identity_tol: 1e-9,
            barrier_tol: 1e-9,
            fd_tol: 1e-7,
            pole_tol: 1e-12,
            fd_step: 1e-5,
            brute_force_cap: 1 << 20,
            subset_cap: 1 << 22,
            max_vectors: 24,
            verify_cap: 1 << 14,
            exhaustive_cap: 1 << 16,
            max_operators: 20,
        }
    }
}
