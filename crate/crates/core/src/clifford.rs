//! Irreducible Clifford generators, grading and reality intertwiner.
//!
//! Generators of `Cl_{n,0}` are Hermitian and square to the identity; those of
//! `Cl_{0,n}` are anti-Hermitian and square to minus the identity. Both
//! families are built from fixed 1x1 and 2x2 seeds by the tensor steps
//! `Cl_{n+2,0} = Cl_{0,n} ⊗ Cl_{2,0}` and `Cl_{0,n+2} = Cl_{n,0} ⊗ Cl_{0,2}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, nullspace, ComplexMatrix, I, ONE, ZERO};

pub const MAX_DIMENSION: usize = 8;

/// Tolerance for the algebraic identities of a [`CliffordRep`].
pub const REP_TOL: f64 = 1e-12;

/// A sign `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(x: f64) -> Self {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Commutation signs of `J` with itself, `D` and `Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignTriple {
    pub eps_j: Sign,
    pub eps_d: Sign,
    /// Present exactly for even `n`.
    pub eps_gamma: Option<Sign>,
}

/// Sign table indexed by `n mod 8`.
pub fn sign_table(n: usize) -> Result<SignTriple> {
    use Sign::{Minus as M, Plus as P};
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    let (eps_j, eps_d, eps_gamma) = match n % 8 {
        0 => (P, P, Some(P)),
        1 => (P, M, None),
        2 => (M, P, Some(M)),
        3 => (M, P, None),
        4 => (M, P, Some(P)),
        5 => (M, M, None),
        6 => (P, P, Some(M)),
        _ => (P, P, None),
    };
    Ok(SignTriple {
        eps_j,
        eps_d,
        eps_gamma,
    })
}

/// Generators with grading and reality matrix for one dimension.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub n: usize,
    pub generators: Vec<ComplexMatrix>,
    pub grading: Option<ComplexMatrix>,
    pub reality: ComplexMatrix,
    pub signs: SignTriple,
}

impl CliffordRep {
    pub fn spinor_dim(&self) -> usize {
        1 << (self.n / 2)
    }

    /// Largest violation of the invariants: generators Hermitian, squaring
    /// to the identity and anticommuting; grading a traceless Hermitian
    /// involution anticommuting with the generators; reality unitary with the
    /// tabulated signs.
    pub fn invariant_defect(&self) -> f64 {
        let d = self.spinor_dim();
        let id = ComplexMatrix::identity(d);
        let mut worst = 0.0f64;
        for (i, a) in self.generators.iter().enumerate() {
            worst = worst.max(a.hermitian_defect());
            worst = worst.max(a.matmul(a).distance(&id));
            for b in &self.generators[i + 1..] {
                worst = worst.max(a.anticommutator(b).max_abs());
            }
        }
        if let Some(g) = &self.grading {
            worst = worst.max(g.hermitian_defect());
            worst = worst.max(g.matmul(g).distance(&id));
            worst = worst.max(g.trace().norm());
            for a in &self.generators {
                worst = worst.max(g.anticommutator(a).max_abs());
            }
        }
        let l = &self.reality;
        let l_adj = l.adjoint();
        worst = worst.max(l.matmul(&l_adj).distance(&id));
        worst = worst.max(
            l.matmul(&l.conj())
                .distance(&id.scale_real(self.signs.eps_j.value())),
        );
        let eps_d = self.signs.eps_d.value();
        for a in &self.generators {
            worst = worst.max(
                l.matmul(&a.conj())
                    .matmul(&l_adj)
                    .distance(&a.scale_real(-eps_d)),
            );
        }
        if let (Some(g), Some(eg)) = (&self.grading, self.signs.eps_gamma) {
            worst = worst.max(
                l.matmul(&g.conj())
                    .matmul(&l_adj)
                    .distance(&g.scale_real(eg.value())),
            );
        }
        worst
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn seeds_positive_two() -> [ComplexMatrix; 2] {
    [
        ComplexMatrix::from_rows(&[vec![ZERO, I], vec![-I, ZERO]]),
        ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
    ]
}

fn seeds_negative_two() -> [ComplexMatrix; 2] {
    [
        ComplexMatrix::from_rows(&[vec![ZERO, -ONE], vec![ONE, ZERO]]),
        ComplexMatrix::from_rows(&[vec![I, ZERO], vec![ZERO, -I]]),
    ]
}

fn check_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIMENSION {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// Hermitian generators of `Cl_{n,0}`.
pub fn positive_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    check_range(n)?;
    Ok(match n {
        1 => vec![ComplexMatrix::identity(1)],
        2 => seeds_positive_two().to_vec(),
        _ => tensor_step(&negative_generators(n - 2)?, &seeds_positive_two()),
    })
}

/// Anti-Hermitian generators of `Cl_{0,n}`.
pub fn negative_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    check_range(n)?;
    Ok(match n {
        1 => vec![ComplexMatrix::diag(&[I])],
        2 => seeds_negative_two().to_vec(),
        _ => tensor_step(&positive_generators(n - 2)?, &seeds_negative_two()),
    })
}

/// `{Id ⊗ s₁, Id ⊗ s₂, f_j ⊗ s₁s₂}`.
fn tensor_step(inner: &[ComplexMatrix], seeds: &[ComplexMatrix; 2]) -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(inner[0].rows());
    let s12 = seeds[0].matmul(&seeds[1]);
    let mut out = vec![kron(&id, &seeds[0]), kron(&id, &seeds[1])];
    out.extend(inner.iter().map(|f| kron(f, &s12)));
    out
}

/// `(−i)^{n/2} A₁⋯A_n` for even `n`.
pub fn build_grading(generators: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = generators.len();
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "grading needs an even number of generators, got {n}"
        )));
    }
    let refs: Vec<&ComplexMatrix> = generators.iter().collect();
    let prefactor = (-I).powu((n / 2) as u32);
    Ok(ComplexMatrix::product(&refs).scale(prefactor))
}

/// Solutions of the reality constraints for a generator set.
#[derive(Clone, Debug)]
pub struct RealitySolutions {
    pub dimension: usize,
    pub basis: Vec<ComplexMatrix>,
}

/// Linear space of `Λ` with `Λ·conj(A_i) = −ε_D A_iΛ` for all `i` and, for
/// even `n`, `Λ·conj(Γ) = ε_Γ ΓΛ`.
pub fn reality_solution_space(
    generators: &[ComplexMatrix],
    grading: Option<&ComplexMatrix>,
    signs: SignTriple,
) -> RealitySolutions {
    let d = generators[0].rows();
    let id = ComplexMatrix::identity(d);
    let eps_d = signs.eps_d.value();
    // Row-major vec: vec(ΛB) = (Id ⊗ Bᵀ)vec(Λ), vec(BΛ) = (B ⊗ Id)vec(Λ).
    let mut blocks: Vec<ComplexMatrix> = generators
        .iter()
        .map(|a| &kron(&id, &a.adjoint()) + &kron(a, &id).scale_real(eps_d))
        .collect();
    if let (Some(g), Some(eg)) = (grading, signs.eps_gamma) {
        blocks.push(&kron(&id, &g.adjoint()) - &kron(g, &id).scale_real(eg.value()));
    }
    let system = stack_rows(&blocks);
    let scale = system.max_abs().max(1.0);
    let ns = nullspace(&system, 1e-9 * scale);
    let basis = (0..ns.cols())
        .map(|j| ComplexMatrix::new(d, d, ns.column(j)).expect("nullspace column has d² entries"))
        .collect();
    RealitySolutions {
        dimension: ns.cols(),
        basis,
    }
}

fn stack_rows(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let cols = blocks[0].cols();
    let rows: usize = blocks.iter().map(ComplexMatrix::rows).sum();
    let data: Vec<Complex64> = blocks
        .iter()
        .flat_map(|b| b.data().iter().copied())
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("stacked blocks share a column count")
}

/// Unitary reality matrix, normalized so that the first entry (row-major)
/// of non-negligible modulus is real and positive.
pub fn build_reality(n: usize) -> Result<ComplexMatrix> {
    Ok(build_generators(n)?.reality)
}

fn normalize_reality(raw: &ComplexMatrix) -> ComplexMatrix {
    let d = raw.rows() as f64;
    let scaled = raw.scale_real(d.sqrt() / raw.frobenius_norm());
    let peak = scaled.max_abs();
    let lead = scaled
        .data()
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-6 * peak)
        .unwrap_or(ONE);
    let aligned = scaled.scale(lead.conj() / lead.norm());
    // Snap rounding noise so exact entries such as ±1 come out exact.
    let data: Vec<Complex64> = aligned
        .data()
        .iter()
        .map(|z| c(snap(z.re), snap(z.im)))
        .collect();
    ComplexMatrix::new(aligned.rows(), aligned.cols(), data).expect("same shape")
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-13 {
        r
    } else {
        x
    }
}

/// Generators, grading and reality matrix for `1 ≤ n ≤ 8`.
pub fn build_generators(n: usize) -> Result<CliffordRep> {
    let generators = positive_generators(n)?;
    let signs = sign_table(n)?;
    let grading = if n % 2 == 0 {
        Some(build_grading(&generators)?)
    } else {
        None
    };
    let space = reality_solution_space(&generators, grading.as_ref(), signs);
    if space.dimension != 1 {
        return Err(Error::Precondition(format!(
            "reality constraints for n = {n} have a {}-dimensional solution space",
            space.dimension
        )));
    }
    let reality = normalize_reality(&space.basis[0]);
    Ok(CliffordRep {
        n,
        generators,
        grading,
        reality,
        signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_table_columns() {
        assert_eq!(
            sign_table(2).unwrap(),
            SignTriple {
                eps_j: Sign::Minus,
                eps_d: Sign::Plus,
                eps_gamma: Some(Sign::Minus)
            }
        );
        assert_eq!(
            sign_table(8).unwrap(),
            SignTriple {
                eps_j: Sign::Plus,
                eps_d: Sign::Plus,
                eps_gamma: Some(Sign::Plus)
            }
        );
        assert_eq!(
            sign_table(5).unwrap(),
            SignTriple {
                eps_j: Sign::Minus,
                eps_d: Sign::Minus,
                eps_gamma: None
            }
        );
        assert!(sign_table(0).is_err());
        for n in 1..=16 {
            assert_eq!(sign_table(n).unwrap(), sign_table(n + 8).unwrap());
            assert_eq!(sign_table(n).unwrap().eps_gamma.is_some(), n % 2 == 0);
        }
    }

    #[test]
    fn base_representations_are_verbatim() {
        let one = build_generators(1).unwrap();
        assert_eq!(one.generators, vec![ComplexMatrix::identity(1)]);
        assert_eq!(one.reality, ComplexMatrix::identity(1));
        let two = build_generators(2).unwrap();
        assert_eq!(
            two.generators[0],
            ComplexMatrix::from_rows(&[vec![ZERO, I], vec![-I, ZERO]])
        );
        assert_eq!(
            two.generators[1],
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
        );
    }

    #[test]
    fn grading_for_two() {
        let rep = build_generators(2).unwrap();
        let g = rep.grading.unwrap();
        assert!(
            g.distance(&ComplexMatrix::from_real_rows(&[
                &[0.0, -1.0],
                &[-1.0, 0.0]
            ])) < 1e-15
        );
        assert!(build_grading(&rep.generators[..1]).is_err());
    }

    #[test]
    fn all_supported_dimensions_satisfy_invariants() {
        for n in 1..=MAX_DIMENSION {
            let rep = build_generators(n).unwrap();
            assert_eq!(rep.generators.len(), n);
            assert_eq!(rep.generators[0].rows(), 1 << (n / 2));
            assert!(
                rep.invariant_defect() <= REP_TOL,
                "n = {n}: {}",
                rep.invariant_defect()
            );
        }
    }

    #[test]
    fn negative_family_squares_to_minus_one() {
        for n in 1..=6 {
            let gens = negative_generators(n).unwrap();
            let id = ComplexMatrix::identity(gens[0].rows());
            for g in &gens {
                assert!(g.adjoint().distance(&-g) < 1e-15);
                assert!(g.matmul(g).distance(&-&id) < 1e-15);
            }
        }
    }

    #[test]
    fn out_of_range_dimensions() {
        assert_eq!(
            build_generators(0).unwrap_err(),
            Error::UnsupportedDimension(0)
        );
        assert_eq!(
            build_generators(9).unwrap_err(),
            Error::UnsupportedDimension(9)
        );
    }
}
