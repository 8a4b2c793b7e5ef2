//! Expected characteristic polynomials of sums of i.i.d. rank-one Gaussian
//! outer products: `(1 − c·d/dx)^k xⁿ`.
//!
//! Expanding gives `cⁿ (−1)ⁿ n! L_n^{(k−n)}(x/c)`, an associated Laguerre
//! polynomial. For `k < n` it factors as `x^{n−k}` times a multiple of
//! `L_k^{(n−k)}(x/c)`. The nonzero roots are therefore `c` times the
//! eigenvalues of the symmetric tridiagonal Jacobi matrix of
//! `L_N^{(α)}` with `N = min(n, k)` and `α = |k − n|`, which stays accurate
//! at degrees where the monomial coefficients no longer determine the roots.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::RealPolynomial;
use crate::error::{Error, Result};
use crate::math::sqrt;

/// `(1 − c·d/dx)^applications xⁿ` by repeated application of the operator.
pub fn laguerre_expected(n: usize, applications: usize, c: f64) -> RealPolynomial {
    (0..applications).fold(RealPolynomial::monomial(n), |p, _| p.one_minus_c_derivative(c))
}

/// Roots of [`laguerre_expected`] with multiplicity, ascending, computed from
/// the Laguerre Jacobi matrix. Requires `c > 0`.
pub fn laguerre_expected_roots(n: usize, applications: usize, c: f64) -> Result<Vec<f64>> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "scale must be positive, got {c}"
        )));
    }
    let order = n.min(applications);
    let alpha = n.abs_diff(applications) as f64;
    let mut roots: Vec<f64> = core::iter::repeat_n(0.0, n - order).collect();
    if order > 0 {
        let jacobi = DMatrix::<f64>::from_fn(order, order, |i, j| {
            if i == j {
                2.0 * i as f64 + 1.0 + alpha
            } else if i.abs_diff(j) == 1 {
                let k = i.max(j) as f64;
                -sqrt(k * (k + alpha))
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jacobi);
        roots.extend(eig.eigenvalues.iter().map(|&y| c * y.max(0.0)));
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}
