//! Hermitian eigendecomposition, backed by nalgebra's symmetric QR.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix};

/// Eigenvalues (ascending) with orthonormal eigenvectors as matrix columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `f(M) = Q f(Λ) Q*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let q = &self.vectors;
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)].conj() * fv[k]).sum::<Complex64>()
        });
        HermitianMatrix::symmetrized(m)
    }
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> HermitianEigen {
    let n = m.dim();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let a = m.matrix();
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = if a.is_real() {
        let re = DMatrix::<f64>::from_fn(n, n, |i, j| a[(i, j)].re);
        let eig = SymmetricEigen::new(re);
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        )
    } else {
        let c = DMatrix::<Complex64>::from_fn(n, n, |i, j| a[(i, j)]);
        let eig = SymmetricEigen::new(c);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    HermitianEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: ComplexMatrix::from_fn(n, n, |i, k| vectors[(i, order[k])]),
    }
}
