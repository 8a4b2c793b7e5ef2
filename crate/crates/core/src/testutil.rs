//! Builders shared by the unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexVector, HermitianMatrix};
use crate::mixedchar::{FiniteSupportVector, MixedInstance, RandomVectorEnsemble};
use crate::{Complex64, NumericPolicy};

pub(crate) fn real_vec(x: &[f64]) -> ComplexVector {
    ComplexVector::from_real(x)
}

/// Per basis direction, `copies` vectors that are `0` or `√(1/copies)·e_i`
/// with probability ½ each.
pub(crate) fn bernoulli_diagonal(n: usize, copies: usize) -> RandomVectorEnsemble {
    let s = (1.0 / copies as f64).sqrt();
    let vectors = (0..n)
        .flat_map(|i| {
            (0..copies).map(move |_| {
                let mut on = vec![0.0; n];
                on[i] = s;
                FiniteSupportVector::new(
                    vec![(0.5, real_vec(&vec![0.0; n])), (0.5, real_vec(&on))],
                    &NumericPolicy::default(),
                )
                .unwrap()
            })
        })
        .collect();
    RandomVectorEnsemble::new(n, vectors).unwrap()
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::new(
        (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

pub(crate) fn random_ensemble(rng: &mut ChaCha8Rng, d: usize, m: usize, max_atoms: usize) -> RandomVectorEnsemble {
    let vectors = (0..m)
        .map(|_| {
            let l = rng.random_range(1..=max_atoms);
            let w: Vec<f64> = (0..l).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = w.iter().sum();
            let atoms = w.iter().map(|&p| (p / total, random_vector(rng, d))).collect();
            FiniteSupportVector::new(atoms, &NumericPolicy::default()).unwrap()
        })
        .collect();
    RandomVectorEnsemble::new(d, vectors).unwrap()
}

pub(crate) fn random_psd_instance(rng: &mut ChaCha8Rng, d: usize, m: usize) -> MixedInstance {
    let mats = (0..m)
        .map(|_| {
            let rank = rng.random_range(1..=d);
            let mut a = HermitianMatrix::zeros(d);
            for _ in 0..rank {
                a.add_outer(&random_vector(rng, d), 1.0);
            }
            a
        })
        .collect();
    MixedInstance::new(d, mats, &NumericPolicy::default()).unwrap()
}

/// Random vectors whitened so that `Σ u u* = I_d`.
pub(crate) fn random_isotropic(rng: &mut ChaCha8Rng, d: usize, m: usize) -> Vec<ComplexVector> {
    let raw: Vec<ComplexVector> = (0..m).map(|_| random_vector(rng, d)).collect();
    let mut v = HermitianMatrix::zeros(d);
    raw.iter().for_each(|u| v.add_outer(u, 1.0));
    let w = crate::linalg::isotropic_normalizer(&v, &NumericPolicy::default()).unwrap();
    raw.iter().map(|u| w.matrix().mul_vec(u).unwrap()).collect()
}
