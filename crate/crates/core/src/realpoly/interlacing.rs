//! Interlacing and common-interlacing tests.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{RealPolynomial, RootFinder};
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

fn root_scale(roots: &[f64]) -> f64 {
    1.0 + roots.iter().fold(0.0f64, |a, r| a.max(r.abs()))
}

/// Whether `g` (degree `n − 1`) interlaces `f` (degree `n`):
/// `β₁ ≤ α₁ ≤ β₂ ≤ … ≤ α_{n−1} ≤ β_n`, each inequality with slack
/// `tol · (1 + max|β|)`.
pub fn interlaces(g: &RealPolynomial, f: &RealPolynomial, tol: f64) -> Result<bool> {
    if g.is_zero() || f.is_zero() || g.degree() + 1 != f.degree() {
        return Err(Error::DegreeMismatch(format!(
            "interlacer must have degree {} but has degree {}",
            f.degree().saturating_sub(1),
            g.degree()
        )));
    }
    let finder = RootFinder::default();
    let beta = finder.roots(f)?;
    let alpha = finder.roots(g)?;
    let (beta, alpha) = (beta.as_slice(), alpha.as_slice());
    let slack = tol * root_scale(beta);
    Ok(alpha
        .iter()
        .enumerate()
        .all(|(i, &a)| beta[i] - slack <= a && a <= beta[i + 1] + slack))
}

fn check_equal_degrees(fs: &[RealPolynomial]) -> Result<usize> {
    let n = fs.first().map_or(0, RealPolynomial::degree);
    if let Some((i, f)) = fs.iter().enumerate().find(|(_, f)| f.degree() != n) {
        return Err(Error::DegreeMismatch(format!(
            "polynomial {i} has degree {} but polynomial 0 has degree {n}",
            f.degree()
        )));
    }
    Ok(n)
}

/// Sampled surrogate for "every convex combination is real-rooted": tests
/// each input, every pairwise midpoint, the uniform average, and `samples`
/// random convex combinations. `false` is definitive; `true` is evidence.
pub fn common_interlacing_test(fs: &[RealPolynomial], samples: usize, tol: f64, seed: u64) -> Result<bool> {
    check_equal_degrees(fs)?;
    if fs.is_empty() {
        return Ok(true);
    }
    let finder = RootFinder::with_tol(tol);
    let ok = |p: &RealPolynomial| finder.is_real_rooted(p).real_rooted;
    let combine = |w: &[f64]| -> RealPolynomial { fs.iter().zip(w).map(|(f, &x)| f.scaled(x)).sum() };
    if !fs.iter().all(ok) {
        return Ok(false);
    }
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            if !ok(&(&fs[i].scaled(0.5) + &fs[j].scaled(0.5))) {
                return Ok(false);
            }
        }
    }
    let k = fs.len();
    if !ok(&combine(&alloc::vec![1.0 / k as f64; k])) {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut w: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        if !ok(&combine(&w)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact root-interval criterion for a common interlacing of real-rooted
/// polynomials of equal degree with positive leading coefficients: with
/// sorted roots `r_i`, `max_i r_i[k] ≤ min_i r_i[k+1]` for every `k`.
pub fn has_common_interlacing(fs: &[RealPolynomial], tol: f64) -> Result<bool> {
    let n = check_equal_degrees(fs)?;
    let finder = RootFinder::default();
    let roots = fs
        .iter()
        .map(|f| finder.roots(f).map(|r| r.as_slice().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let scale = roots.iter().map(|r| root_scale(r)).fold(1.0, f64::max);
    let slack = tol * scale;
    Ok((0..n.saturating_sub(1)).all(|k| {
        let hi = roots.iter().map(|r| r[k]).fold(f64::NEG_INFINITY, f64::max);
        let lo = roots.iter().map(|r| r[k + 1]).fold(f64::INFINITY, f64::min);
        hi <= lo + slack
    }))
}

/// Where the root of a sum lands relative to its summands' roots in `[s, t]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeparateReport {
    /// The single root of each input inside `[s, t]`.
    pub individual_roots: Vec<f64>,
    /// Roots of the sum inside `[s, t]`.
    pub sum_roots: Vec<f64>,
    pub min_individual: f64,
    pub max_individual: f64,
    /// Exactly one sum root, lying in `[min_individual, max_individual]`.
    pub confirmed: bool,
}

/// Checks the separation property on `[s, t]`: if every input has the same
/// sign at `s`, the same sign at `t`, and exactly one root in between, then
/// the sum has exactly one root there, between the extreme individual roots.
pub fn separate_check(fs: &[RealPolynomial], s: f64, t: f64) -> Result<SeparateReport> {
    if fs.is_empty() || !(s < t) {
        return Err(Error::Precondition(format!(
            "need at least one polynomial and s < t (got s = {s}, t = {t})"
        )));
    }
    let finder = RootFinder::from_policy(&NumericPolicy::default());
    let in_range =
        |p: &RealPolynomial| -> Vec<f64> { finder.real_roots(p).into_iter().filter(|&r| s <= r && r <= t).collect() };
    let sign_ok = |x: f64| {
        let signs: Vec<f64> = fs
            .iter()
            .map(|f| f.eval(x))
            .filter(|&v| v != 0.0)
            .map(f64::signum)
            .collect();
        signs.windows(2).all(|w| w[0] == w[1])
    };
    if !sign_ok(s) {
        return Err(Error::Precondition(format!(
            "polynomials do not share a sign at s = {s}"
        )));
    }
    if !sign_ok(t) {
        return Err(Error::Precondition(format!(
            "polynomials do not share a sign at t = {t}"
        )));
    }
    let mut individual_roots = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        let r = in_range(f);
        if r.len() != 1 {
            return Err(Error::Precondition(format!(
                "polynomial {i} has {} roots in [{s}, {t}], expected exactly one",
                r.len()
            )));
        }
        individual_roots.push(r[0]);
    }
    let sum: RealPolynomial = fs.iter().cloned().sum();
    let sum_roots = in_range(&sum);
    let min_individual = individual_roots.iter().copied().fold(f64::INFINITY, f64::min);
    let max_individual = individual_roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let confirmed = sum_roots.len() == 1 && min_individual <= sum_roots[0] && sum_roots[0] <= max_individual;
    Ok(SeparateReport {
        individual_roots,
        sum_roots,
        min_individual,
        max_individual,
        confirmed,
    })
}

/// Sampled Hermite–Kakeya–Obreschkoff check: whether `a·f + b·g` is
/// real-rooted for `samples` random real pairs `(a, b)`.
pub fn hko_test(f: &RealPolynomial, g: &RealPolynomial, samples: usize, seed: u64) -> bool {
    let finder = RootFinder::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let h = &f.scaled(a) + &g.scaled(b);
        h.is_zero() || finder.is_real_rooted(&h).real_rooted
    })
}
