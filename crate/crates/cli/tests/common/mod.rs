//! Random builders shared by the integration tests.

#![allow(dead_code)]

use kadison_core::linalg::{isotropic_normalizer, ComplexVector, HermitianMatrix};
use kadison_core::mixedchar::{FiniteSupportVector, MixedInstance, RandomVectorEnsemble};
use kadison_core::{Complex64, NumericPolicy};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::new(
        (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// `m` independent vectors, each with `1..=max_atoms` atoms of random weight.
pub fn random_ensemble(rng: &mut ChaCha8Rng, d: usize, m: usize, max_atoms: usize) -> RandomVectorEnsemble {
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

/// PSD matrices of random rank `1..=d`.
pub fn random_psd_instance(rng: &mut ChaCha8Rng, d: usize, m: usize) -> MixedInstance {
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
pub fn random_isotropic(rng: &mut ChaCha8Rng, d: usize, m: usize) -> Vec<ComplexVector> {
    let raw: Vec<ComplexVector> = (0..m).map(|_| random_vector(rng, d)).collect();
    let mut v = HermitianMatrix::zeros(d);
    raw.iter().for_each(|u| v.add_outer(u, 1.0));
    let w = isotropic_normalizer(&v, &NumericPolicy::default()).unwrap();
    raw.iter().map(|u| w.matrix().mul_vec(u).unwrap()).collect()
}

/// `A_i = u_i u_i*`.
pub fn rank_one_instance(vectors: &[ComplexVector]) -> MixedInstance {
    let d = vectors[0].dim();
    MixedInstance::new(
        d,
        vectors.iter().map(|u| u.outer_self()).collect(),
        &NumericPolicy::default(),
    )
    .unwrap()
}

/// Runs the tool in-process; returns `(exit code, stdout, stderr)`.
pub fn run_cli(args: &[&str], stdin: &[u8]) -> (u8, Vec<u8>, String) {
    let mut input = stdin;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = kadison_cli::main_with(
        std::iter::once("kadison").chain(args.iter().copied()),
        &mut input,
        &mut out,
        &mut err,
    );
    (code, out, String::from_utf8(err).unwrap())
}

/// The JSON report with its wall time removed.
pub fn without_wall_time(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

/// The report text without its `wall_time_s` line, for byte comparisons.
pub fn strip_wall_time(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec())
        .unwrap()
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_s\""))
        .map(|l| format!("{l}\n"))
        .collect()
}
