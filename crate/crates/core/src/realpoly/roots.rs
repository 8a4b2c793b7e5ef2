//! Real root finding.
//!
//! Real-rootedness is decided from the eigenvalues of the balanced companion
//! matrix. Roots themselves come from a derivative recursion: the roots of
//! `p′` split the line into intervals on which `p` is monotone, so each
//! interval holds at most one root and bisection finds it. A critical point at
//! which `p` vanishes (to working precision) is a multiple root, and its
//! location is the well-conditioned root of the lower derivative. This keeps
//! fixtures like `(x − 1/2)^n` exact where companion eigenvalues would split
//! them by `ε^{1/n}`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::RealPolynomial;
use crate::error::{Error, Result};
use crate::math::{powf, powi};
use crate::policy::NumericPolicy;

/// Rounding errors, in units of `ε`, that the loose pass allows on top of the
/// coefficient-noise model.
const NOISE_ULPS: f64 = 1024.0;

/// Sorted real roots, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RootList {
    roots: Vec<f64>,
}

impl RootList {
    pub(crate) fn from_sorted(roots: Vec<f64>) -> Self {
        debug_assert!(roots.windows(2).all(|w| w[0] <= w[1]));
        Self { roots }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn largest(&self) -> Option<f64> {
        self.roots.last().copied()
    }

    pub fn smallest(&self) -> Option<f64> {
        self.roots.first().copied()
    }

    /// Groups roots closer than `rel_tol · (1 + max|root|)` into
    /// `(mean, multiplicity)` clusters.
    pub fn clusters(&self, rel_tol: f64) -> Vec<(f64, usize)> {
        let scale = 1.0 + self.roots.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        let gap = rel_tol * scale;
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &r in &self.roots {
            match out.last_mut() {
                Some((sum, count)) if r - last <= gap => {
                    *sum += r;
                    *count += 1;
                }
                _ => out.push((r, 1)),
            }
            last = r;
        }
        out.into_iter()
            .map(|(sum, count)| (sum / count as f64, count))
            .collect()
    }
}

/// Outcome of a real-rootedness test.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RealRootedness {
    pub real_rooted: bool,
    /// Largest `|Im|` among the companion-matrix eigenvalues.
    pub max_imag: f64,
}

/// Tolerances for root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFinder {
    /// Companion eigenvalues with `|Im| ≤ tol · (1 + max|root|)` count as real.
    pub tol: f64,
    /// A critical point where `|p|` is below `multiple_tol` times the
    /// evaluation scale, and which does not sit between two sign changes, is
    /// a multiple root.
    pub multiple_tol: f64,
    /// Roots closer than `cluster_tol · (1 + max|root|)` are treated as one
    /// perturbed multiple root and relocated to the root of the matching
    /// derivative.
    pub cluster_tol: f64,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self::from_policy(&NumericPolicy::default())
    }
}

impl RootFinder {
    pub fn from_policy(policy: &NumericPolicy) -> Self {
        Self {
            tol: policy.real_root_tol,
            multiple_tol: policy.multiple_root_tol,
            cluster_tol: policy.cluster_tol,
        }
    }

    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// Eigenvalues of the balanced companion matrix of `p` (exact zero roots
    /// included as zeros).
    pub fn companion_eigenvalues(&self, p: &RealPolynomial) -> Vec<Complex64> {
        let c = p.coeffs();
        if c.len() <= 1 {
            return Vec::new();
        }
        let zeros = c.iter().take_while(|&&x| x == 0.0).count();
        let c = &c[zeros..];
        let n = c.len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        if n == 0 {
            return out;
        }
        let lead = c[n];
        let mut m = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -c[n - 1 - j] / lead;
        }
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        balance(&mut m);
        out.extend(m.complex_eigenvalues().iter().copied());
        out
    }

    pub fn is_real_rooted(&self, p: &RealPolynomial) -> RealRootedness {
        if p.is_zero() {
            return RealRootedness {
                real_rooted: false,
                max_imag: 0.0,
            };
        }
        let eig = self.companion_eigenvalues(p);
        let max_imag = eig.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
        let scale = 1.0 + eig.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let real_rooted = max_imag <= self.tol * scale || self.derivative_recursion(p.coeffs()).is_some();
        RealRootedness { real_rooted, max_imag }
    }

    /// All roots with multiplicity, ascending. Fails on input that is not
    /// real-rooted within tolerance.
    pub fn roots(&self, p: &RealPolynomial) -> Result<RootList> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(r) = self.derivative_recursion(p.coeffs()) {
            return Ok(RootList::from_sorted(self.refine_clusters(p, r)));
        }
        let eig = self.companion_eigenvalues(p);
        let max_imag = eig.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
        let scale = 1.0 + eig.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if max_imag > self.tol * scale {
            return Err(Error::NotRealRooted { max_imag });
        }
        let dp = p.derivative();
        let mut r: Vec<f64> = eig
            .iter()
            .map(|z| {
                let x = z.re;
                let d = dp.eval(x);
                let fx = p.eval(x);
                if d != 0.0 {
                    // Near a multiple root `p'` vanishes too and a raw Newton
                    // step can jump to a neighbouring root.
                    let y = x - fx / d;
                    if y.is_finite() && p.eval(y).abs() < fx.abs() {
                        return y;
                    }
                }
                x
            })
            .collect();
        r.sort_by(f64::total_cmp);
        Ok(RootList::from_sorted(self.refine_clusters(p, r)))
    }

    /// Rounding splits a `k`-fold root by `~ε^{1/k}`, but it stays a simple,
    /// well-conditioned root of `p^{(k−1)}`. Each group of `k ≥ 2` roots
    /// spanning less than `cluster_tol · scale` is replaced by `k` copies of
    /// the root of `p^{(k−1)}` inside the group's hull.
    fn refine_clusters(&self, p: &RealPolynomial, mut roots: Vec<f64>) -> Vec<f64> {
        let scale = 1.0 + roots.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        let gap = self.cluster_tol * scale;
        let mut start = 0;
        while start < roots.len() {
            let mut end = start + 1;
            while end < roots.len() && roots[end] - roots[start] <= gap {
                end += 1;
            }
            let (lo, hi) = (roots[start], roots[end - 1]);
            if end - start >= 2 && lo < hi {
                let q = p.nth_derivative(end - start - 1);
                if let Some(x) = bisect_sign_change(&q, lo, hi) {
                    roots[start..end].iter_mut().for_each(|r| *r = x);
                }
            }
            start = end;
        }
        roots
    }

    pub fn largest_root(&self, p: &RealPolynomial) -> Result<f64> {
        if p.degree() == 0 && !p.is_zero() {
            return Err(Error::NoRoots);
        }
        self.roots(p)?.largest().ok_or(Error::NoRoots)
    }

    /// Every real root of `p` with multiplicity, ascending, whether or not
    /// `p` is real-rooted.
    pub fn real_roots(&self, p: &RealPolynomial) -> Vec<f64> {
        if p.is_zero() {
            return Vec::new();
        }
        self.real_roots_of(p.coeffs(), false)
    }

    /// All roots via the derivative recursion, if it finds `deg p` of them.
    /// The tight evaluation bound is tried first; coefficients carrying
    /// upstream noise (characteristic polynomials of rank-deficient matrices,
    /// say) need the looser coefficient-noise scale.
    fn derivative_recursion(&self, c: &[f64]) -> Option<Vec<f64>> {
        [false, true].into_iter().find_map(|loose| {
            let r = self.real_roots_of(c, loose);
            (r.len() + 1 == c.len()).then_some(r)
        })
    }

    fn real_roots_of(&self, c: &[f64], loose: bool) -> Vec<f64> {
        let n = c.len().saturating_sub(1);
        match n {
            0 => return Vec::new(),
            1 => return vec![-c[0] / c[1]],
            _ => {}
        }
        let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect();
        let crit = self.real_roots_of(&dc, loose);

        let mut points: Vec<(f64, usize)> = Vec::new();
        for &x in &crit {
            match points.last_mut() {
                Some((y, m)) if *y == x => *m += 1,
                _ => points.push((x, 1)),
            }
        }
        let cauchy = 1.0 + c[..n].iter().fold(0.0f64, |a, &x| a.max((x / c[n]).abs()));
        // Root radius `max_j |c_{n−j}/c_n|^{1/j}`; coefficient noise of a
        // polynomial with roots of this size is `~ ε |c_n| (R + |x|)^n`.
        let radius = (1..=n).fold(0.0f64, |a, j| a.max(powf((c[n - j] / c[n]).abs(), 1.0 / j as f64)));
        let noise = |x: f64| c[n].abs() * powi(radius + x.abs(), n as i32);
        let lo = (-cauchy).min(points.first().map_or(0.0, |p| p.0) - 1.0);
        let hi = cauchy.max(points.last().map_or(0.0, |p| p.0) + 1.0);

        let eval = |x: f64| -> (f64, f64) {
            let ax = x.abs();
            c.iter()
                .rev()
                .fold((0.0, 0.0), |(v, b), &a| (v * x + a, b * ax + a.abs()))
        };

        // (position, value, multiplicity in p′, is root of p)
        let mut seq: Vec<(f64, f64, usize, bool)> = Vec::with_capacity(points.len() + 2);
        seq.push((lo, eval(lo).0, 0, false));
        for &(x, m) in &points {
            let v = eval(x).0;
            seq.push((x, v, m, v == 0.0));
        }
        seq.push((hi, eval(hi).0, 0, false));
        for i in 1..seq.len() - 1 {
            let (x, v, _, is_root) = seq[i];
            if is_root {
                continue;
            }
            let bound = eval(x).1;
            let tight = self.multiple_tol * bound;
            let coefficient_noise = NOISE_ULPS * f64::EPSILON * noise(x);
            let threshold = if loose { tight.max(coefficient_noise) } else { tight };
            if v.abs() <= threshold {
                // Below the rounding floor the sign of `v` is noise, so a
                // crossing on both sides says nothing about two nearby roots.
                // With noisy coefficients the floor is the coefficient noise:
                // near zero the evaluation bound only sees the noisy `c_0`.
                let floor = if loose {
                    coefficient_noise
                } else {
                    NOISE_ULPS * f64::EPSILON * bound
                };
                let left = seq[i - 1].1;
                let right = seq[i + 1].1;
                let crosses = |w: f64| w != 0.0 && w.signum() != v.signum();
                if v.abs() <= floor || !(crosses(left) && crosses(right)) {
                    seq[i].3 = true;
                }
            }
        }

        // Consecutive root-flagged critical points are one cluster: two
        // distinct roots of `p` always have an unflagged critical point
        // between them, so the cluster carries the p′-multiplicities plus one.
        let mut roots = Vec::with_capacity(n);
        let mut i = 0;
        while i < seq.len() {
            if !seq[i].3 {
                i += 1;
                continue;
            }
            let (mut weighted, mut mult) = (0.0, 0);
            while i < seq.len() && seq[i].3 {
                weighted += seq[i].0 * seq[i].2 as f64;
                mult += seq[i].2;
                i += 1;
            }
            roots.extend(core::iter::repeat_n(weighted / mult as f64, mult + 1));
        }
        for w in seq.windows(2) {
            let (a, fa, _, ra) = w[0];
            let (b, fb, _, rb) = w[1];
            if ra || rb || fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
                continue;
            }
            roots.push(bisect(&eval, a, b, fa));
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

fn bisect(eval: &impl Fn(f64) -> (f64, f64), mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..2100 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval(m).0;
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Parlett–Reinsch balancing with radix-2 scalings.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].abs();
                    row += m[(i, j)].abs();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = row + col;
            let mut f = 1.0;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Roots with multiplicity, sorted ascending.
pub fn roots(p: &RealPolynomial, tol: f64) -> Result<RootList> {
    RootFinder::with_tol(tol).roots(p)
}

/// Largest real root with default tolerances.
pub fn largest_root(p: &RealPolynomial) -> Result<f64> {
    RootFinder::default().largest_root(p)
}

pub fn is_real_rooted(p: &RealPolynomial, tol: f64) -> RealRootedness {
    RootFinder::with_tol(tol).is_real_rooted(p)
}

fn bisect_sign_change(q: &RealPolynomial, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (q.eval(lo), q.eval(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Some(mid);
        }
        let fm = q.eval(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}
