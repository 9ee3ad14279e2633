//! Decides whether a family of Hermitian matrices generates a Clifford
//! algebra, alongside the pencil and antisymmetrized-product criteria.

use num_complex::Complex64;
use serde::Serialize;

use crate::axioms::{pencil_minimum, DEFAULT_PENCIL_SAMPLES};
use crate::error::{Error, Result};
use crate::linalg::{
    antisymmetrized_product, determinant, hermitian_eigen, nan_max, ComplexMatrix,
};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PENCIL_THRESHOLD: f64 = 1e-6;
pub const ALGEBRA_TOL: f64 = 1e-9;

/// Eigenvalue scale factors used by [`rescaled_generators`] by default.
pub const DEFAULT_RESCALE: [f64; 8] = [2.0, 0.5, 3.0, 1.0 / 3.0, 1.5, 0.7, 2.5, 0.4];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliffordVerdict {
    pub generator_count: usize,
    pub size: usize,
    pub is_hermitian: bool,
    pub hermitian_defect: f64,
    pub pencil_nonsingular: bool,
    pub min_singular_value: f64,
    pub pencil_direction: Vec<f64>,
    pub pencil_samples: usize,
    pub seed: u64,
    /// Odd count: `P = λ·Id`. Even count: `P² = λ²·Id`. Here `P` is the
    /// antisymmetrized product, and `λ` must be nonzero.
    pub antisym_scalar: bool,
    pub lambda: Complex64,
    pub antisym_residual: f64,
    /// `½{A_i, A_j} = g_ij·Id` with `g` real symmetric positive definite.
    pub anticommutator_form: bool,
    pub gram: Option<Vec<Vec<f64>>>,
    pub anticommutator_residual: f64,
    pub overall: bool,
}

fn validate(matrices: &[ComplexMatrix]) -> Result<usize> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidArgument("no matrices given".into()))?;
    let d = first.rows();
    if d == 0 || matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::InvalidArgument(
            "matrices must be square, nonempty and of equal size".into(),
        ));
    }
    Ok(d)
}

/// Largest deviation of `m` from `(tr m / d)·Id`, with that scalar.
fn scalar_part(m: &ComplexMatrix) -> (Complex64, f64) {
    let d = m.rows();
    let s = m.trace() / d as f64;
    (s, (m - &ComplexMatrix::identity(d).scale(s)).max_abs())
}

fn is_positive_definite(g: &[Vec<f64>]) -> bool {
    let k = g.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = g[i][j] - (0..j).map(|p| l[i][p] * l[j][p]).sum::<f64>();
            if i == j {
                if s <= ALGEBRA_TOL {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

pub fn check(matrices: &[ComplexMatrix]) -> Result<CliffordVerdict> {
    check_with(matrices, DEFAULT_PENCIL_SAMPLES, 0)
}

pub fn check_with(
    matrices: &[ComplexMatrix],
    samples: usize,
    seed: u64,
) -> Result<CliffordVerdict> {
    let d = validate(matrices)?;
    let k = matrices.len();
    let hermitian_defect = matrices
        .iter()
        .map(ComplexMatrix::hermitian_defect)
        .fold(0.0, nan_max);
    let is_hermitian = hermitian_defect <= HERMITIAN_TOL;

    let pencil = pencil_minimum(matrices, samples, seed)?;
    let pencil_nonsingular = pencil.value > PENCIL_THRESHOLD;

    let p = antisymmetrized_product(matrices)?;
    let (lambda, antisym_residual) = if k % 2 == 1 {
        scalar_part(&p)
    } else {
        let (sq, r) = scalar_part(&p.matmul(&p));
        (sq.sqrt(), r)
    };
    let scale = lambda.norm_sqr().max(1.0);
    let antisym_residual = antisym_residual / if k % 2 == 1 { scale.sqrt() } else { scale };
    let antisym_scalar = antisym_residual <= ALGEBRA_TOL && lambda.norm() > ALGEBRA_TOL;

    let mut gram = vec![vec![0.0; k]; k];
    let mut anticommutator_residual = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let half = matrices[i].anticommutator(&matrices[j]).scale_real(0.5);
            let (s, r) = scalar_part(&half);
            anticommutator_residual = anticommutator_residual.max(r).max(s.im.abs());
            gram[i][j] = s.re;
            gram[j][i] = s.re;
        }
    }
    let form_holds = is_hermitian && anticommutator_residual <= ALGEBRA_TOL;
    let anticommutator_form = form_holds && is_positive_definite(&gram);
    Ok(CliffordVerdict {
        generator_count: k,
        size: d,
        is_hermitian,
        hermitian_defect,
        pencil_nonsingular,
        min_singular_value: pencil.value,
        pencil_direction: pencil.direction,
        pencil_samples: pencil.samples,
        seed,
        antisym_scalar,
        lambda,
        antisym_residual,
        anticommutator_form,
        gram: form_holds.then_some(gram),
        anticommutator_residual,
        overall: anticommutator_form,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilGridMinimum {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub points: usize,
}

/// `min |det Σ x_i A_i|` over a spherical grid, for up to three matrices.
/// `resolution` is rounded up to a multiple of 8 so that directions such as
/// `(1, −1)/√2` lie on the grid. Antipodal points give the same modulus, so
/// only a half-sphere is visited.
pub fn brute_force_pencil(
    matrices: &[ComplexMatrix],
    resolution: usize,
) -> Result<PencilGridMinimum> {
    validate(matrices)?;
    let k = matrices.len();
    if k > 3 {
        return Err(Error::InvalidArgument(format!(
            "grid search supports at most 3 matrices, got {k}"
        )));
    }
    let res = resolution.max(8).div_ceil(8) * 8;
    let pi = std::f64::consts::PI;
    let directions: Vec<Vec<f64>> = match k {
        1 => vec![vec![1.0]],
        2 => (0..res)
            .map(|j| pi * j as f64 / res as f64)
            .map(|a| vec![a.cos(), a.sin()])
            .collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..=res / 2 {
                let polar = pi * i as f64 / (res / 2) as f64;
                let azimuths = if i == 0 || i == res / 2 { 1 } else { res };
                for j in 0..azimuths {
                    let az = 2.0 * pi * j as f64 / res as f64;
                    out.push(vec![
                        polar.sin() * az.cos(),
                        polar.sin() * az.sin(),
                        polar.cos(),
                    ]);
                }
            }
            out
        }
    };
    let mut best = PencilGridMinimum {
        value: f64::INFINITY,
        argmin: Vec::new(),
        points: directions.len(),
    };
    for x in directions {
        let v = determinant(&crate::axioms::pencil_matrix(matrices, &x))?.norm();
        if v < best.value {
            best.value = v;
            best.argmin = x;
        }
    }
    Ok(best)
}

/// Replaces the first matrix `A₁ = U Λ U†` by `U diag(s_k λ_k) U†`, keeping the
/// others. Eigenvalues are taken in ascending order.
pub fn rescaled_generators(
    matrices: &[ComplexMatrix],
    scales: &[f64],
) -> Result<Vec<ComplexMatrix>> {
    let d = validate(matrices)?;
    if scales.len() < d || scales[..d].iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need {d} nonzero finite scale factors"
        )));
    }
    let eig = hermitian_eigen(&matrices[0])?;
    let scaled: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .zip(scales)
        .map(|(l, s)| Complex64::new(l * s, 0.0))
        .collect();
    let u = &eig.eigenvectors;
    let first = u.matmul(&ComplexMatrix::diag(&scaled)).matmul(&u.adjoint());
    let mut out = vec![first];
    out.extend(matrices[1..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE, ZERO};

    fn pauli() -> Vec<ComplexMatrix> {
        vec![
            ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
            ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
            ComplexMatrix::diag(&[ONE, -ONE]),
        ]
    }

    #[test]
    fn pauli_triple_is_clifford_with_imaginary_lambda() {
        let v = check(&pauli()).unwrap();
        assert!(v.overall && v.antisym_scalar && v.pencil_nonsingular);
        assert!((v.lambda.norm() - 6.0).abs() < 1e-12);
        assert!(v.lambda.re.abs() < 1e-12);
        assert_eq!(
            v.gram.unwrap(),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn duplicate_pair_fails() {
        let a = pauli()[0].clone();
        let v = check(&[a.clone(), a.clone()]).unwrap();
        assert!(!v.overall && !v.pencil_nonsingular && !v.antisym_scalar);
        let g = brute_force_pencil(&[a.clone(), a], 16).unwrap();
        assert!(g.value < 1e-15);
        // (1, −1)/√2 up to the antipodal sign
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.argmin[0].abs() - r).abs() < 1e-12 && (g.argmin[0] + g.argmin[1]).abs() < 1e-12);
    }

    #[test]
    fn grid_minimum_for_clifford_generators_is_one() {
        let g = brute_force_pencil(&pauli(), 24).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        assert!(brute_force_pencil(&vec![pauli()[0].clone(); 4], 8).is_err());
    }

    #[test]
    fn non_hermitian_input_is_flagged() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]);
        let v = check(&[m]).unwrap();
        assert!(!v.is_hermitian && !v.overall);
        assert!(check(&[]).is_err());
        assert!(check(&[ComplexMatrix::identity(2), ComplexMatrix::identity(3)]).is_err());
    }

    #[test]
    fn rescaling_keeps_eigenvectors() {
        let r = rescaled_generators(&pauli(), &[2.0, 0.5]).unwrap();
        // diag(1, −1) has eigenvalues −1, 1 in ascending order
        let expect = ComplexMatrix::diag(&[Complex64::new(0.5, 0.0), Complex64::new(-2.0, 0.0)]);
        let p = pauli();
        let r2 = rescaled_generators(&[p[2].clone(), p[0].clone()], &[2.0, 0.5]).unwrap();
        assert!(r2[0].distance(&expect) < 1e-14);
        assert_eq!(r[1], p[1]);
        assert!(rescaled_generators(&p, &[1.0]).is_err());
    }
}
