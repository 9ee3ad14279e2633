mod common;

use common::{c, sqrt_prime_theta};
use nctorus::torus::{apply_operator, product_relation_check};
use nctorus::triple::KERNEL_TOL;
use nctorus::{
    assemble, canonical_a, Complex64, TauMatrix, ThetaMatrix, TripleConfig, TruncatedLattice,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(eps: &[f64], theta: &[f64], tau: &[f64], cutoff: usize) -> TripleConfig {
    let n = eps.len();
    TripleConfig {
        theta: ThetaMatrix::from_upper(n, theta).unwrap(),
        tau: TauMatrix::from_row_major(n, tau).unwrap(),
        ..TripleConfig::simple(eps, cutoff)
    }
}

fn random_tau(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let t: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if TauMatrix::from_row_major(n, &t)
            .map(|m| m.det().abs() > 0.2)
            .unwrap_or(false)
        {
            return t;
        }
    }
}

/// With `C = 0` the block at `μ` squares to `|v|²` with `v_j = τʲ·μ`, so its
/// eigenvalues are `±|v|`, each with multiplicity half the spinor size.
fn closed_form_spectrum(eps: &[f64], tau: &[f64], cutoff: usize) -> Vec<f64> {
    let n = eps.len();
    let lat = TruncatedLattice::new(eps, cutoff).unwrap();
    let half = lat.spinor_mult() / 2;
    let mut out = Vec::new();
    for s in 0..lat.site_count() {
        let mu = lat.site(s);
        let norm = (0..n)
            .map(|j| (0..n).map(|i| tau[i * n + j] * mu[i]).sum::<f64>().powi(2))
            .sum::<f64>()
            .sqrt();
        if lat.spinor_mult() == 1 {
            out.push((0..n).map(|i| tau[i] * mu[i]).sum());
            continue;
        }
        out.extend(std::iter::repeat(norm).take(half));
        out.extend(std::iter::repeat(-norm).take(half));
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn spectrum_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, cutoff) in [(1, 5), (2, 4), (3, 3), (4, 2)] {
        let eps: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.5 } else { 0.0 }).collect();
        let tau = random_tau(n, &mut rng);
        let t = assemble(config(&eps, &sqrt_prime_theta(n), &tau, cutoff)).unwrap();
        let mut got = t.full_spectrum();
        got.sort_by(f64::total_cmp);
        let want = closed_form_spectrum(&eps, &tau, cutoff);
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn kernel_and_gap_separate_plane_spin_structures() {
    let id = [1.0, 0.0, 0.0, 1.0];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for (eps, kernel, gap) in [
        ([0.0, 0.0], 2, 0.0),
        ([0.5, 0.0], 0, 0.5),
        ([0.0, 0.5], 0, 0.5),
        ([0.5, 0.5], 0, r),
    ] {
        let t = assemble(config(&eps, &[0.3], &id, 6)).unwrap();
        let spec = t.full_spectrum();
        assert_eq!(t.kernel_dimension(KERNEL_TOL), kernel, "{eps:?}");
        let min_nonzero = spec
            .iter()
            .map(|l| l.abs())
            .filter(|l| *l > KERNEL_TOL)
            .fold(f64::INFINITY, f64::min);
        let min_all = spec.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
        if kernel == 0 {
            assert!((min_all - gap).abs() < 1e-12, "{eps:?}: {min_all}");
        } else {
            assert!((min_nonzero - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn reality_is_an_antiunitary_with_tabulated_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5 {
        let eps: Vec<f64> = (0..n).map(|i| if i == 0 { 0.5 } else { 0.0 }).collect();
        let t = assemble(config(
            &eps,
            &sqrt_prime_theta(n),
            &random_tau(n, &mut rng),
            2,
        ))
        .unwrap();
        let dim = t.lattice.dimension();
        let v: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let w: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let (jv, jw) = (t.apply_j(&v), t.apply_j(&w));
        let inner = |a: &[Complex64], b: &[Complex64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
        };
        assert!(
            (inner(&jv, &jw) - inner(&v, &w).conj()).norm() < 1e-10,
            "n = {n}"
        );
        let jj = t.apply_j(&jv);
        let sign = t.rep.signs.eps_j.value();
        let err = jj
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * sign).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "n = {n}: {err}");
        // JD = ε_D DJ holds on the whole box since both operators preserve it.
        let d = t.dirac();
        let lhs = t.apply_j(&apply_operator(&d, &v));
        let rhs = apply_operator(&d, &jv);
        let eps_d = t.rep.signs.eps_d.value();
        let err = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b * eps_d).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "n = {n}: {err}");
    }
}

proptest! {
    #[test]
    fn spectrum_is_independent_of_theta(t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, t3 in 0.0f64..1.0) {
        for (eps, theta, cutoff) in [(vec![0.5, 0.0], vec![t1], 5usize), (vec![0.0, 0.5, 0.5], vec![t1, t2, t3], 3)] {
            let n = eps.len();
            let tau: Vec<f64> = (0..n * n).map(|k| if k % (n + 1) == 0 { 1.0 } else { 0.25 }).collect();
            let base = assemble(config(&eps, &vec![0.0; theta.len()], &tau, cutoff)).unwrap().full_spectrum();
            let moved = assemble(config(&eps, &theta, &tau, cutoff)).unwrap().full_spectrum();
            prop_assert_eq!(base.len(), moved.len());
            for (a, b) in base.iter().zip(&moved) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn monomials_obey_product_and_commutation_rules(
        theta in proptest::collection::vec(-1.0f64..1.0, 3),
        x in proptest::collection::vec(-2i64..=2, 3),
        y in proptest::collection::vec(-2i64..=2, 3),
    ) {
        let th = ThetaMatrix::from_upper(3, &theta).unwrap();
        let lat = TruncatedLattice::new(&[0.5, 0.0, 0.5], 4).unwrap();
        let r = product_relation_check(&x, &y, &lat, &canonical_a(&th));
        prop_assert!(r.product <= 1e-12 && r.commutation <= 1e-12);
        prop_assert!(r.interior_sites >= lat.interior_floor());
    }
}
