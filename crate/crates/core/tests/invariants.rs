//! Property checks of the public API, one block per module.

use kadison_core::barrier::{build_certificate, BarrierPolynomial, MultivariateEvaluator, Probe};
use kadison_core::interlace::{descend, exhaustive_minimum};
use kadison_core::linalg::{
    char_poly, det, hermitian_eigen, isotropic_normalizer, jacobi_directional, operator_norm, rank1_update_det,
    ComplexMatrix, ComplexVector, HermitianMatrix,
};
use kadison_core::mixedchar::{
    conditional_expected_poly, expected_char_poly_bruteforce, mixed_char_poly, FiniteSupportVector, MixedInstance,
    RandomVectorEnsemble,
};
use kadison_core::realpoly::{largest_root, RealPolynomial, RootFinder};
use kadison_core::weaver::{gen_from_graph, gen_gaussian, lift, partition, spectral_approx_check, Graph};
use kadison_core::{Complex64, NumericPolicy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn policy() -> NumericPolicy {
    NumericPolicy::default()
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::new(
        (0..d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_psd(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> HermitianMatrix {
    let mut a = HermitianMatrix::zeros(d);
    for _ in 0..rank {
        a.add_outer(&random_vector(rng, d), 1.0);
    }
    a
}

fn random_ensemble(rng: &mut ChaCha8Rng, d: usize, m: usize, max_atoms: usize) -> RandomVectorEnsemble {
    let vectors = (0..m)
        .map(|_| {
            let l = rng.random_range(1..=max_atoms);
            let w: Vec<f64> = (0..l).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = w.iter().sum();
            let atoms = w.iter().map(|&p| (p / total, random_vector(rng, d))).collect();
            FiniteSupportVector::new(atoms, &policy()).unwrap()
        })
        .collect();
    RandomVectorEnsemble::new(d, vectors).unwrap()
}

/// `m ≥ d` random vectors whitened so that `Σ u u* = I_d`.
fn random_isotropic(rng: &mut ChaCha8Rng, d: usize, m: usize) -> Vec<ComplexVector> {
    let raw: Vec<ComplexVector> = (0..m).map(|_| random_vector(rng, d)).collect();
    let mut v = HermitianMatrix::zeros(d);
    raw.iter().for_each(|u| v.add_outer(u, 1.0));
    let w = isotropic_normalizer(&v, &policy()).unwrap();
    raw.iter().map(|u| w.matrix().mul_vec(u).unwrap()).collect()
}

fn random_real_rooted(rng: &mut ChaCha8Rng, degree: usize) -> RealPolynomial {
    let roots: Vec<f64> = (0..degree).map(|_| rng.random_range(-3.0..3.0)).collect();
    RealPolynomial::from_roots(&roots).scaled(rng.random_range(0.5..2.0))
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // ---- linalg ----

    #[test]
    fn rank_one_update_matches_the_determinant(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, d);
        let (u, v) = (random_vector(&mut rng, d), random_vector(&mut rng, d));
        let direct = det(&a.add(&u.outer(&v)).unwrap()).unwrap();
        let lemma = rank1_update_det(&a, &u, &v, &policy()).unwrap();
        prop_assert!(close(direct, lemma, 1e-9), "{direct} vs {lemma}");
    }

    #[test]
    fn char_poly_vanishes_at_the_eigenvalues(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_psd(&mut rng, d, d);
        let p = char_poly(&m);
        prop_assert_eq!(p.degree(), d);
        for lambda in hermitian_eigen(&m).values {
            let (v, scale) = p.eval_with_bound(lambda);
            prop_assert!(v.abs() <= 1e-8 * scale.max(1.0), "χ({lambda}) = {v}, scale {scale}");
        }
    }

    #[test]
    fn operator_norm_is_the_largest_char_root(seed in any::<u64>(), d in 1usize..=5, rank in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_psd(&mut rng, d, rank.min(d));
        let norm = operator_norm(&m, &policy()).unwrap();
        let root = largest_root(&char_poly(&m)).unwrap();
        prop_assert!((norm - root).abs() <= 1e-9 * norm.max(1.0), "{norm} vs {root}");
    }

    #[test]
    fn jacobi_formula_matches_finite_differences(seed in any::<u64>(), d in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, d).add(&ComplexMatrix::identity(d).scaled(2.0)).unwrap();
        let b = random_matrix(&mut rng, d);
        let h = 1e-6;
        let f = |t: f64| det(&a.add(&b.scaled(t)).unwrap()).unwrap();
        let fd = (f(h) - f(-h)) / (2.0 * h);
        let exact = jacobi_directional(&a, &b, &policy()).unwrap();
        prop_assert!(close(fd, exact, 1e-5), "{fd} vs {exact}");
    }

    // ---- realpoly ----

    #[test]
    fn derivative_roots_stay_below_the_largest_root(seed in any::<u64>(), degree in 2usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_real_rooted(&mut rng, degree);
        let finder = RootFinder::default();
        let top = finder.largest_root(&p).unwrap();
        prop_assert!(finder.largest_root(&p.derivative()).unwrap() <= top + 1e-8 * top.abs().max(1.0));
    }

    // ---- mixedchar ----

    #[test]
    fn mixed_equals_expected_and_is_monic_real_rooted(
        seed in any::<u64>(), d in 1usize..=4, m in 1usize..=6, atoms in 1usize..=3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_ensemble(&mut rng, d, m, atoms);
        let mu = mixed_char_poly(&MixedInstance::from_ensemble(&e), &policy()).unwrap();
        let brute = expected_char_poly_bruteforce(&e, &policy()).unwrap();
        prop_assert!(mu.max_rel_deviation(&brute) <= 1e-9);
        prop_assert_eq!(mu.degree(), d);
        prop_assert!((mu.leading() - 1.0).abs() <= 1e-12);
        prop_assert!(RootFinder::default().is_real_rooted(&mu).real_rooted);
    }

    #[test]
    fn higher_rank_mixed_polynomials_are_real_rooted(seed in any::<u64>(), d in 2usize..=4, m in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mats = (0..m)
            .map(|_| {
                let rank = rng.random_range(2..=d);
                random_psd(&mut rng, d, rank)
            })
            .collect();
        let inst = MixedInstance::new(d, mats, &policy()).unwrap();
        let mu = mixed_char_poly(&inst, &policy()).unwrap();
        prop_assert!(RootFinder::default().is_real_rooted(&mu).real_rooted);
    }

    #[test]
    fn conditional_polynomials_sum_to_their_parent(
        seed in any::<u64>(), d in 1usize..=3, m in 1usize..=5, atoms in 1usize..=3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_ensemble(&mut rng, d, m, atoms);
        let mut prefix = Vec::new();
        for k in 0..m {
            let parent = conditional_expected_poly(&e, &prefix, &policy()).unwrap();
            let children: RealPolynomial = (0..e.vectors()[k].len())
                .map(|t| {
                    let mut child = prefix.clone();
                    child.push(t);
                    conditional_expected_poly(&e, &child, &policy()).unwrap()
                })
                .sum();
            prop_assert!(parent.max_rel_deviation(&children) <= 1e-9);
            prefix.push(rng.random_range(0..e.vectors()[k].len()));
        }
    }

    #[test]
    fn isotropic_mixed_roots_respect_the_barrier_bound(seed in any::<u64>(), d in 1usize..=4, extra in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = random_isotropic(&mut rng, d, d + extra);
        let inst = MixedInstance::new(d, vs.iter().map(|u| u.outer_self()).collect(), &policy()).unwrap();
        let eps = inst.max_trace();
        let root = RootFinder::default().largest_root(&mixed_char_poly(&inst, &policy()).unwrap()).unwrap();
        prop_assert!(root <= (1.0 + eps.sqrt()).powi(2) + 1e-7);
    }

    // ---- interlace ----

    #[test]
    fn descent_is_monotone_and_sandwiched(
        seed in any::<u64>(), d in 1usize..=3, m in 1usize..=5, atoms in 1usize..=3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_ensemble(&mut rng, d, m, atoms);
        let trace = descend(&e, &policy()).unwrap();
        let (_, best) = exhaustive_minimum(&e, &policy()).unwrap();
        prop_assert!(trace.is_monotone(1e-8));
        prop_assert!(best <= trace.final_root + 1e-9);
        prop_assert!(trace.final_root <= trace.root_of_empty + 1e-8);
        let sequence = trace.root_sequence();
        for (step, parent) in trace.steps.iter().zip(&sequence) {
            let best_child = step.candidate_roots.iter().flatten().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(best_child <= parent + 1e-8);
            prop_assert_eq!(step.chosen_root, best_child);
        }
    }

    #[test]
    fn permuting_atoms_permutes_the_choice(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // three equally likely atoms for the first vector
        let first: Vec<ComplexVector> = (0..3).map(|_| random_vector(&mut rng, d)).collect();
        let rest = random_ensemble(&mut rng, d, m, 2);
        let build = |order: &[usize]| {
            let atoms = order.iter().map(|&j| (1.0 / 3.0, first[j].clone())).collect();
            let mut vectors = vec![FiniteSupportVector::new(atoms, &policy()).unwrap()];
            vectors.extend(rest.vectors().iter().cloned());
            RandomVectorEnsemble::new(d, vectors).unwrap()
        };
        let order = [2, 0, 1];
        let base = descend(&build(&[0, 1, 2]), &policy()).unwrap();
        let permuted = descend(&build(&order), &policy()).unwrap();
        let roots: Vec<f64> = base.steps[0].candidate_roots.iter().flatten().copied().collect();
        let mut sorted = roots.clone();
        sorted.sort_by(f64::total_cmp);
        // only a strict minimum determines the choice independently of ties
        prop_assume!(sorted[1] - sorted[0] > 1e-6 * sorted[0].abs().max(1.0));
        prop_assert_eq!(order[permuted.steps[0].chosen], base.steps[0].chosen);
    }

    // ---- barrier ----

    #[test]
    fn grouped_trace_formula(seed in any::<u64>(), d in 1usize..=4, groups in 1usize..=4, t in 0.2f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // rank-one isotropic vectors summed in groups give PSD A_i with Σ A_i = I
        let vs = random_isotropic(&mut rng, d, d + groups);
        let mut mats = vec![HermitianMatrix::zeros(d); groups];
        for (k, u) in vs.iter().enumerate() {
            mats[k % groups].add_outer(u, 1.0);
        }
        let inst = MixedInstance::new(d, mats, &policy()).unwrap();
        let p = MultivariateEvaluator::new(&inst, &policy());
        let z = vec![t; groups];
        let value = p.eval(&z).unwrap();
        for (i, a) in inst.matrices().iter().enumerate() {
            let phi = p.partial(&z, i).unwrap() / value;
            prop_assert!((phi - a.trace() / t).abs() <= 1e-10, "{phi} vs {}", a.trace() / t);
        }
    }

    #[test]
    fn rank_one_partials_are_exact_differences(seed in any::<u64>(), d in 1usize..=3, extra in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = random_isotropic(&mut rng, d, d + extra);
        let m = vs.len();
        let inst = MixedInstance::new(d, vs.iter().map(|u| u.outer_self()).collect(), &policy()).unwrap();
        let p = MultivariateEvaluator::new(&inst, &policy());
        let y: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0)).collect();
        for i in 0..m {
            let mut shifted = y.clone();
            shifted[i] += 1.0;
            let difference = p.eval(&shifted).unwrap() - p.eval(&y).unwrap();
            let partial = p.partial(&y, i).unwrap();
            prop_assert!((difference - partial).abs() <= 1e-9 * partial.abs().max(1.0));
        }
    }

    #[test]
    fn valid_certificates_bound_the_mixed_root(seed in any::<u64>(), d in 1usize..=3, extra in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = random_isotropic(&mut rng, d, d + extra);
        let inst = MixedInstance::new(d, vs.iter().map(|u| u.outer_self()).collect(), &policy()).unwrap();
        let cert = build_certificate(&inst, None, &Probe::default(), &policy()).unwrap();
        if cert.valid {
            let root = RootFinder::default().largest_root(&mixed_char_poly(&inst, &policy()).unwrap()).unwrap();
            prop_assert!(root <= cert.bound + 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // ---- weaver ----

    #[test]
    fn lift_is_isotropic_with_bounded_atoms(seed in any::<u64>(), n in 1usize..=3, r in 2usize..=3) {
        let inst = gen_gaussian(n, 0.5, seed, &policy()).unwrap();
        let e = lift(&inst, r).unwrap();
        prop_assert_eq!(e.dim(), r * n);
        let total = HermitianMatrix::sum(e.dim(), &e.covariances());
        let identity = HermitianMatrix::identity(e.dim());
        let deviation = total.sub(&identity).unwrap().matrix().frobenius_norm();
        prop_assert!(deviation <= 1e-9, "‖Σ cov − I‖ = {deviation}");
        let delta = inst.measured_delta();
        for v in e.vectors() {
            for (_, w) in v.atoms() {
                prop_assert!(w.norm_sqr() <= r as f64 * delta + 1e-10);
            }
        }
    }

    #[test]
    fn part_norms_reconstruct_the_lifted_root(seed in any::<u64>(), n in 1usize..=2, r in 2usize..=3) {
        let inst = gen_gaussian(n, 0.5, seed, &policy()).unwrap();
        let report = partition(&inst, r, &policy()).unwrap();
        prop_assert!((report.lifted_root - r as f64 * report.max_norm).abs() <= 1e-9 * report.lifted_root.max(1.0));
        let mut seen: Vec<usize> = report.parts.concat();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..inst.len()).collect::<Vec<_>>());
    }

    #[test]
    fn leverage_scores_sum_to_n_minus_one(seed in any::<u64>(), n in 2usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // a random spanning path plus random extra edges keeps the graph connected
        let mut edges: Vec<(usize, usize, f64)> =
            (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(0.5..2.0))).collect();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(0.3) {
                    edges.push((a, b, rng.random_range(0.5..2.0)));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let gi = gen_from_graph(&g, &policy()).unwrap();
        let leverage: f64 = gi.instance.vectors().iter().map(ComplexVector::norm_sqr).sum();
        prop_assert!((leverage - (n - 1) as f64).abs() <= 1e-8);
        let (lo, hi) = spectral_approx_check(&g, &g, &policy()).unwrap();
        prop_assert!((lo - 1.0).abs() <= 1e-10 && (hi - 1.0).abs() <= 1e-10, "({lo}, {hi})");
    }
}
