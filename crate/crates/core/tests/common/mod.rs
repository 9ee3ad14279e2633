#![allow(dead_code)]

use nctorus::linalg::hermitian_eigen;
use nctorus::{Complex64, ComplexMatrix};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows)
}

/// Hermitian pair generating `Cl_{2,0}`.
pub fn cl20_pair() -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(0.0, 0.0)],
        ]),
        real(&[&[1.0, 0.0], &[0.0, -1.0]]),
    ]
}

/// Matrix parts of `J` for `n = 2, 3, 4, 5` in the basis built from the pair above.
pub fn reference_lambdas() -> Vec<(usize, ComplexMatrix)> {
    let j2 = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let j4 = real(&[
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ]);
    let j5 = real(&[
        &[0.0, 0.0, -1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, -1.0, 0.0, 0.0],
    ]);
    vec![(2, j2.clone()), (3, j2), (4, j4), (5, j5)]
}

/// The admissible constant block for `n = 4`, parametrized by `a, b ∈ ℂ`.
pub fn c_pattern_four(a: Complex64, b: Complex64) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    ComplexMatrix::from_rows(&[
        vec![z, z, a, b],
        vec![z, z, -b.conj(), a.conj()],
        vec![a.conj(), -b, z, z],
        vec![b.conj(), a, z, z],
    ])
}

/// `max |X − e^{iφ} Y|` with `φ = arg tr(Y†X)`. Infinite when `X ⟂ Y`.
pub fn phase_aligned_distance(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let overlap: Complex64 = y
        .data()
        .iter()
        .zip(x.data())
        .map(|(a, b)| a.conj() * b)
        .sum();
    if overlap.norm() < 1e-12 || x.rows() != y.rows() {
        return f64::INFINITY;
    }
    x.distance(&y.scale(overlap / overlap.norm()))
}

/// Upper-triangle `θ` entries `frac(√p)` over the primes `2, 3, 5, …`.
pub fn sqrt_prime_theta(n: usize) -> Vec<f64> {
    let mut primes = Vec::new();
    let mut k = 2u64;
    while primes.len() < n * (n - 1) / 2 {
        if primes.iter().all(|p| k % p != 0) {
            primes.push(k);
        }
        k += 1;
    }
    primes.iter().map(|&p| (p as f64).sqrt().fract()).collect()
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..d {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn det2(m: &ComplexMatrix) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
}

/// For `2×2` Hermitian matrices `det Σ x_i A_i` is a real quadratic form
/// `xᵀQx`; the pencil is nonsingular exactly when `Q` is definite. `Q` is
/// recovered by polarization. Returns the smallest `|eigenvalue|` of `Q`
/// when definite, `None` otherwise.
pub fn exact_pencil_margin(mats: &[ComplexMatrix]) -> Option<f64> {
    let k = mats.len();
    let mut q = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        q[(i, i)] = c(det2(&mats[i]), 0.0);
        for j in i + 1..k {
            let v = 0.5 * (det2(&(&mats[i] + &mats[j])) - det2(&mats[i]) - det2(&mats[j]));
            q[(i, j)] = c(v, 0.0);
            q[(j, i)] = c(v, 0.0);
        }
    }
    let ev = hermitian_eigen(&q).unwrap().eigenvalues;
    let definite = ev.iter().all(|&l| l > 0.0) || ev.iter().all(|&l| l < 0.0);
    definite.then(|| ev.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min))
}

/// Unitary `V = [V₊ | V₋]` of `Γ` eigenvectors (`+1` first), with `V₋`
/// rotated so that the upper-right block of `V†C₀V` is a positive multiple
/// of the identity.
pub fn chirality_frame(grading: &ComplexMatrix, c0: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eigen(grading).unwrap();
    let d = grading.rows();
    let h = d / 2;
    let plus: Vec<usize> = (0..d).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    let minus: Vec<usize> = (0..d).filter(|&k| eig.eigenvalues[k] < 0.0).collect();
    assert_eq!((plus.len(), minus.len()), (h, h));
    let pick = |cols: &[usize]| ComplexMatrix::from_fn(d, h, |i, j| eig.eigenvectors[(i, cols[j])]);
    let (vp, vm) = (pick(&plus), pick(&minus));
    let q0 = vp.adjoint().matmul(c0).matmul(&vm);
    let r = (q0.adjoint().matmul(&q0).trace().re / h as f64).sqrt();
    let vm = vm.matmul(&q0.scale_real(1.0 / r).adjoint());
    ComplexMatrix::from_fn(d, d, |i, j| if j < h { vp[(i, j)] } else { vm[(i, j - h)] })
}

/// Orthonormal basis of `d×d` Hermitian matrices for `⟨X, Y⟩ = Re tr(X†Y)`.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            if i == j {
                let mut m = ComplexMatrix::zeros(d, d);
                m[(i, i)] = c(1.0, 0.0);
                out.push(m);
                continue;
            }
            for z in [c(r, 0.0), c(0.0, r)] {
                let mut m = ComplexMatrix::zeros(d, d);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
                out.push(m);
            }
        }
    }
    out
}
