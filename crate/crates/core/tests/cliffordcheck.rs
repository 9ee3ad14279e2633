mod common;

use common::{c, cl20_pair, exact_pencil_margin, random_hermitian};
use nctorus::cliffordcheck::{
    brute_force_pencil, check, check_with, rescaled_generators, DEFAULT_RESCALE,
};
use nctorus::{build_generators, ComplexMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn identity_gram(k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

#[test]
fn generated_representations_pass_with_identity_gram() {
    for n in 1..=8 {
        let rep = build_generators(n).unwrap();
        let v = check_with(&rep.generators, 256, 1).unwrap();
        assert!(
            v.overall && v.antisym_scalar && v.pencil_nonsingular,
            "n = {n}"
        );
        let g = v.gram.unwrap();
        for (row, expect) in g.iter().zip(identity_gram(n)) {
            for (a, b) in row.iter().zip(expect) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        assert!((v.min_singular_value - 1.0).abs() < 1e-10);
    }
}

#[test]
fn reference_pair_has_lambda_of_modulus_two() {
    let v = check(&cl20_pair()).unwrap();
    assert!(v.overall);
    assert_eq!(v.gram.unwrap(), identity_gram(2));
    assert!((v.lambda.norm() - 2.0).abs() < 1e-12);
    let one = check(&[ComplexMatrix::identity(1)]).unwrap();
    assert!(one.overall && (one.lambda - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn odd_lambda_squares_to_signed_factorial() {
    // (γ₁⋯γ_n)² = (−1)^{n(n−1)/2} for anticommuting involutions
    for n in [1usize, 3, 5, 7] {
        let v = check_with(&build_generators(n).unwrap().generators, 64, 0).unwrap();
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let sign = if (n * (n - 1) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let sq = v.lambda * v.lambda;
        assert!(
            (sq - c(sign * fact * fact, 0.0)).norm() < 1e-9 * fact * fact,
            "n = {n}: {}",
            v.lambda
        );
    }
}

#[test]
fn rescaled_families_keep_invertibility_but_lose_the_product_identity() {
    for n in 4..=6 {
        let gens = build_generators(n).unwrap().generators;
        let r = rescaled_generators(&gens, &DEFAULT_RESCALE).unwrap();
        let v = check(&r).unwrap();
        assert!(v.pencil_nonsingular, "n = {n}: {}", v.min_singular_value);
        assert!(!v.antisym_scalar, "n = {n}");
        assert!(!v.anticommutator_form && !v.overall);
    }
}

#[test]
fn rescaled_pauli_triple_is_invertible_but_not_scalar() {
    // Counterexample in three generators: the exact quadratic-form test
    // certifies the pencil, yet the antisymmetrized product is not scalar.
    let gens = build_generators(3).unwrap().generators;
    let r = rescaled_generators(&gens, &[2.0, 0.5]).unwrap();
    assert!(exact_pencil_margin(&r).is_some());
    let v = check(&r).unwrap();
    assert!(v.pencil_nonsingular && !v.antisym_scalar);
}

#[test]
fn sampled_pencil_agrees_with_exact_form_on_two_by_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut seen = [0usize; 2];
    for trial in 0..150 {
        let k = 2 + trial % 2;
        let mats: Vec<ComplexMatrix> = (0..k).map(|_| random_hermitian(2, &mut rng)).collect();
        let exact = exact_pencil_margin(&mats);
        if matches!(exact, Some(m) if m < 1e-3) {
            continue;
        }
        let v = check_with(&mats, 512, 3).unwrap();
        assert_eq!(v.pencil_nonsingular, exact.is_some(), "trial {trial}");
        seen[usize::from(exact.is_some())] += 1;
    }
    assert!(seen[0] > 10 && seen[1] > 10, "{seen:?}");
}

#[test]
fn invertible_pairs_have_scalar_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = 0;
    while found < 200 {
        let mats: Vec<ComplexMatrix> = (0..2).map(|_| random_hermitian(2, &mut rng)).collect();
        if exact_pencil_margin(&mats).is_none() {
            continue;
        }
        found += 1;
        assert!(check_with(&mats, 64, 0).unwrap().antisym_scalar);
    }
}

#[test]
fn grid_oracle_matches_sampling_for_small_sets() {
    let gens = build_generators(3).unwrap().generators;
    let g = brute_force_pencil(&gens, 32).unwrap();
    assert!((g.value - 1.0).abs() < 1e-12);
    let mut with_kernel = gens.clone();
    for m in &mut with_kernel {
        m[(0, 0)] = c(0.0, 0.0);
        m[(0, 1)] = c(0.0, 0.0);
        m[(1, 0)] = c(0.0, 0.0);
    }
    assert!(brute_force_pencil(&with_kernel, 8).unwrap().value < 1e-15);
}

proptest! {
    #[test]
    fn linear_images_of_generators_stay_clifford(entries in proptest::collection::vec(-2.0f64..2.0, 9)) {
        let l: Vec<Vec<f64>> = entries.chunks(3).map(<[f64]>::to_vec).collect();
        let det = nctorus::linalg::real_determinant(&l);
        prop_assume!(det.abs() > 0.1);
        let a = build_generators(3).unwrap().generators;
        let b: Vec<ComplexMatrix> = (0..3)
            .map(|i| (0..3).fold(ComplexMatrix::zeros(2, 2), |acc, j| &acc + &a[j].scale_real(l[i][j])))
            .collect();
        let v = check_with(&b, 64, 0).unwrap();
        prop_assert!(v.anticommutator_form);
        prop_assert!(v.antisym_scalar);
        prop_assert!((v.lambda.norm() - 6.0 * det.abs()).abs() < 1e-8 * det.abs().max(1.0));
    }

    #[test]
    fn random_scaling_of_one_generator_is_detected(s in 0.2f64..5.0) {
        prop_assume!((s - 1.0).abs() > 1e-3);
        let mut a = build_generators(4).unwrap().generators;
        a[0] = a[0].scale_real(s);
        let v = check_with(&a, 64, 0).unwrap();
        prop_assert!(v.anticommutator_form);
        prop_assert!(v.overall);
        let mut rng = ChaCha8Rng::seed_from_u64((s * 1e6) as u64);
        let k = rng.gen_range(0..4);
        a[k] = &a[k] + &ComplexMatrix::identity(4).scale_real(0.5);
        prop_assert!(!check_with(&a, 64, 0).unwrap().overall);
    }
}
